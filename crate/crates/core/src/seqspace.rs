//! Ultrametric sequence spaces: words over a finite alphabet with
//! distance `rho^(common prefix length)`, cell algebra, the exact
//! Hausdorff measure at every exponent, and materialization into the
//! atomic and point models.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::atomic::{AtomicSpace, Provenance};
use crate::error::{Error, Result};
use crate::metric::PointSpace;
use crate::value::{alpha_cost, ContentValue};

/// Digits used for the string form of cells: symbol 0 is '0', symbol 10
/// is 'a', and so on. This bounds representable alphabets at 36 symbols.
const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Absolute tolerance on the exponent when deciding whether alpha sits at
/// the critical value.
pub const ALPHA_STAR_TOL: f64 = 1e-12;

/// Default cap on `n^depth` for materialization.
pub const DEFAULT_MATERIALIZE_LIMIT: usize = 4096;

/// Parameters of a truncated sequence space: alphabet size, contraction
/// ratio, and the truncation depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpaceSpec {
    pub n: u32,
    pub rho: f64,
    pub depth: u32,
}

impl SequenceSpaceSpec {
    pub fn new(n: u32, rho: f64, depth: u32) -> Result<Self> {
        if !(2..=DIGITS.len() as u32).contains(&n) {
            return Err(Error::BadParams(format!(
                "alphabet size must be in 2..={}, got {n}",
                DIGITS.len()
            )));
        }
        if !rho.is_finite() || rho <= 0.0 || rho >= 1.0 {
            return Err(Error::BadParams(format!("rho must be in (0,1), got {rho}")));
        }
        if depth == 0 {
            return Err(Error::BadParams("depth must be at least 1".into()));
        }
        Ok(SequenceSpaceSpec { n, rho, depth })
    }

    /// The critical exponent: `n * rho^alpha = 1`.
    pub fn alpha_star(&self) -> f64 {
        (self.n as f64).ln() / (1.0 / self.rho).ln()
    }

    /// Diameter of a cell at the given level (the whole space at level 0).
    pub fn cell_diam(&self, level: u32) -> f64 {
        self.rho.powi(level as i32)
    }

    /// The `index`-th full-depth word in lexicographic order.
    pub fn word_at(&self, index: usize) -> Cell {
        let mut word = vec![0u32; self.depth as usize];
        let mut rem = index;
        for slot in word.iter_mut().rev() {
            *slot = (rem % self.n as usize) as u32;
            rem /= self.n as usize;
        }
        Cell { word }
    }
}

/// A cell: the set of sequences extending a finite word. The empty word
/// is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub word: Vec<u32>,
}

impl Cell {
    pub fn new(word: Vec<u32>) -> Self {
        Cell { word }
    }

    pub fn level(&self) -> u32 {
        self.word.len() as u32
    }

    /// Parse the base-36 string form.
    pub fn parse(s: &str) -> Result<Self> {
        let word = s
            .bytes()
            .map(|b| {
                DIGITS
                    .iter()
                    .position(|&d| d == b.to_ascii_lowercase())
                    .map(|p| p as u32)
                    .ok_or(Error::BadSymbol {
                        symbol: b as u32,
                        n: DIGITS.len() as u32,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cell { word })
    }

    fn check_symbols(&self, spec: &SequenceSpaceSpec) -> Result<()> {
        match self.word.iter().find(|&&s| s >= spec.n) {
            Some(&s) => Err(Error::BadSymbol {
                symbol: s,
                n: spec.n,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.word {
            f.write_str(
                std::str::from_utf8(&DIGITS[s as usize..s as usize + 1])
                    .expect("digit table is ascii"),
            )?;
        }
        Ok(())
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Cell::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn common_prefix_len(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Distance between two cells: 0 when the words are equal, otherwise
/// `rho^l` with `l` the common prefix length. For disjoint cells this is
/// simultaneously the inf- and sup-distance between them (ultrametricity);
/// for nested cells it is the diameter of the outer one.
pub fn cell_distance(spec: &SequenceSpaceSpec, w1: &Cell, w2: &Cell) -> Result<f64> {
    w1.check_symbols(spec)?;
    w2.check_symbols(spec)?;
    if w1.word == w2.word {
        return Ok(0.0);
    }
    Ok(spec.cell_diam(common_prefix_len(&w1.word, &w2.word) as u32))
}

/// How two cells relate as sets. Cells are never partially overlapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellRelation {
    Equal,
    Nested1In2,
    Nested2In1,
    Disjoint,
}

pub fn cell_relation(c1: &Cell, c2: &Cell) -> CellRelation {
    let l = common_prefix_len(&c1.word, &c2.word);
    if l == c1.word.len() && l == c2.word.len() {
        CellRelation::Equal
    } else if l == c2.word.len() {
        // c2's word prefixes c1's: c1 is the deeper, smaller cell.
        CellRelation::Nested1In2
    } else if l == c1.word.len() {
        CellRelation::Nested2In1
    } else {
        CellRelation::Disjoint
    }
}

/// Result of pushing a covering by cells down to a common level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedCovering {
    pub level: u32,
    pub level_cells: Vec<Cell>,
    pub cost_before: f64,
    pub cost_after: f64,
}

/// Replace every cell of a covering by its descendants at the deepest
/// level present. At the critical exponent the alpha-cost is preserved
/// exactly; the resulting level-l family must contain all n^l cells.
pub fn normalize_covering(
    spec: &SequenceSpaceSpec,
    cells: &[Cell],
    alpha: f64,
) -> Result<NormalizedCovering> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    for c in cells {
        c.check_symbols(spec)?;
        if c.level() > spec.depth {
            return Err(Error::BadParams(format!(
                "cell {c} is deeper than the truncation depth {}",
                spec.depth
            )));
        }
    }
    if cells.is_empty() {
        return Err(Error::NotACovering(String::new()));
    }
    let level = cells.iter().map(Cell::level).max().unwrap_or(0);

    // Coverage check: every sequence must extend one of the cells. A
    // prefix is covered when it extends a listed cell, or when all its
    // children are covered.
    fn covered(spec: &SequenceSpaceSpec, cells: &[Cell], prefix: &mut Vec<u32>, max: u32) -> bool {
        if cells
            .iter()
            .any(|c| c.word.len() <= prefix.len() && prefix.starts_with(&c.word))
        {
            return true;
        }
        if prefix.len() as u32 >= max {
            return false;
        }
        for s in 0..spec.n {
            prefix.push(s);
            let ok = covered(spec, cells, prefix, max);
            prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut probe = Vec::new();
    if !covered(spec, cells, &mut probe, level) {
        // Re-run tracking the first uncovered prefix for the error report.
        fn witness(
            spec: &SequenceSpaceSpec,
            cells: &[Cell],
            prefix: &mut Vec<u32>,
            max: u32,
        ) -> Option<Cell> {
            if cells
                .iter()
                .any(|c| c.word.len() <= prefix.len() && prefix.starts_with(&c.word))
            {
                return None;
            }
            if prefix.len() as u32 >= max {
                return Some(Cell::new(prefix.clone()));
            }
            for s in 0..spec.n {
                prefix.push(s);
                let w = witness(spec, cells, prefix, max);
                prefix.pop();
                if w.is_some() {
                    return w;
                }
            }
            None
        }
        let w = witness(spec, cells, &mut Vec::new(), level);
        return Err(Error::NotACovering(
            w.map(|c| c.to_string()).unwrap_or_default(),
        ));
    }

    let mut cost_before = 0.0;
    let mut cost_after = 0.0;
    let mut level_cells = Vec::new();
    for c in cells {
        let j = c.level();
        cost_before += alpha_cost(spec.cell_diam(j), alpha);
        let gap = level - j;
        let count = (spec.n as usize).pow(gap);
        cost_after += count as f64 * alpha_cost(spec.cell_diam(level), alpha);
        // Enumerate the n^(l-j) descendants in symbol order.
        let mut suffix = vec![0u32; gap as usize];
        for idx in 0..count {
            let mut rem = idx;
            for slot in suffix.iter_mut().rev() {
                *slot = (rem % spec.n as usize) as u32;
                rem /= spec.n as usize;
            }
            let mut word = c.word.clone();
            word.extend_from_slice(&suffix);
            level_cells.push(Cell::new(word));
        }
    }

    Ok(NormalizedCovering {
        level,
        level_cells,
        cost_before,
        cost_after,
    })
}

/// Which side of the critical exponent a measure request fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalRegime {
    BelowCritical,
    Critical,
    AboveCritical,
}

/// The exact Hausdorff measure of the full sequence space at `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureDecision {
    pub value: ContentValue,
    pub regime: CriticalRegime,
    /// The critical exponent the request was compared against.
    pub alpha_star: f64,
}

/// Exact measure by the cell-normalization argument: the level-l full
/// covering costs `n^l * rho^(l alpha)`, whose limit is 1 at the critical
/// exponent, +infinity below it, and 0 above it.
pub fn exact_measure(spec: &SequenceSpaceSpec, alpha: f64) -> Result<MeasureDecision> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    let star = spec.alpha_star();
    let (value, regime) = if (alpha - star).abs() <= ALPHA_STAR_TOL {
        (ContentValue::finite(1.0), CriticalRegime::Critical)
    } else if alpha < star {
        (ContentValue::Infinite, CriticalRegime::BelowCritical)
    } else {
        (ContentValue::finite(0.0), CriticalRegime::AboveCritical)
    };
    Ok(MeasureDecision {
        value,
        regime,
        alpha_star: star,
    })
}

/// A materialized truncation: full-depth cells as atoms, one
/// representative point per cell, and the cells themselves in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub atomic: AtomicSpace,
    pub points: PointSpace,
    pub cells: Vec<Cell>,
}

pub fn materialize(spec: &SequenceSpaceSpec) -> Result<Materialized> {
    materialize_with_limit(spec, DEFAULT_MATERIALIZE_LIMIT)
}

/// Materialize the depth-level cells. Each atom stands for the cylinder
/// of its extensions, so atom diameters are `rho^depth` exactly and both
/// distance tables equal the cell distance.
pub fn materialize_with_limit(spec: &SequenceSpaceSpec, limit: usize) -> Result<Materialized> {
    let count = (spec.n as usize)
        .checked_pow(spec.depth)
        .ok_or(Error::TooLarge {
            cells: usize::MAX,
            limit,
        })?;
    if count > limit {
        return Err(Error::TooLarge {
            cells: count,
            limit,
        });
    }
    let cells: Vec<Cell> = (0..count).map(|i| spec.word_at(i)).collect();
    let atom_diam = vec![spec.cell_diam(spec.depth); count];
    let mut sup = vec![vec![0.0; count]; count];
    let mut inf = vec![vec![0.0; count]; count];
    let mut point_dist = vec![vec![0.0; count]; count];
    for i in 0..count {
        sup[i][i] = atom_diam[i];
        for j in (i + 1)..count {
            let d = spec.cell_diam(common_prefix_len(&cells[i].word, &cells[j].word) as u32);
            sup[i][j] = d;
            sup[j][i] = d;
            inf[i][j] = d;
            inf[j][i] = d;
            point_dist[i][j] = d;
            point_dist[j][i] = d;
        }
    }
    let atomic = AtomicSpace::new(atom_diam, sup, inf, Provenance::CellSpace)?;
    let points = PointSpace::from_table_unchecked(point_dist);
    Ok(Materialized {
        atomic,
        points,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::exact_content;
    use crate::value::Delta;

    fn third_space(depth: u32) -> SequenceSpaceSpec {
        SequenceSpaceSpec::new(2, 1.0 / 3.0, depth).unwrap()
    }

    #[test]
    fn alpha_star_satisfies_defining_identity() {
        let spec = third_space(3);
        let a = spec.alpha_star();
        assert!((2.0 * (1.0f64 / 3.0).powf(a) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cell_distance_cases() {
        let spec = third_space(3);
        let w = |s: &str| Cell::parse(s).unwrap();
        assert_eq!(cell_distance(&spec, &w("01"), &w("01")).unwrap(), 0.0);
        assert_eq!(cell_distance(&spec, &w("0"), &w("1")).unwrap(), 1.0);
        assert!((cell_distance(&spec, &w("00"), &w("01")).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cell_distance_rejects_bad_symbols() {
        let spec = third_space(2);
        let c = Cell::new(vec![2]);
        assert!(matches!(
            cell_distance(&spec, &c, &c),
            Err(Error::BadSymbol { symbol: 2, n: 2 })
        ));
    }

    #[test]
    fn relations() {
        let w = |s: &str| Cell::parse(s).unwrap();
        assert_eq!(cell_relation(&w("0"), &w("01")), CellRelation::Nested2In1);
        assert_eq!(cell_relation(&w("01"), &w("0")), CellRelation::Nested1In2);
        assert_eq!(cell_relation(&w("0"), &w("1")), CellRelation::Disjoint);
        assert_eq!(cell_relation(&w("01"), &w("01")), CellRelation::Equal);
    }

    #[test]
    fn nesting_dichotomy_is_exhaustive() {
        // All cells up to level 2 over a 2-letter alphabet: any pair is
        // nested, equal, or disjoint; partial overlap cannot be expressed.
        let mut cells = vec![Cell::new(vec![])];
        for a in 0..2 {
            cells.push(Cell::new(vec![a]));
            for b in 0..2 {
                cells.push(Cell::new(vec![a, b]));
            }
        }
        for c1 in &cells {
            for c2 in &cells {
                let rel = cell_relation(c1, c2);
                if c1.word == c2.word {
                    assert_eq!(rel, CellRelation::Equal);
                }
            }
        }
    }

    #[test]
    fn normalize_preserves_critical_cost() {
        let spec = third_space(3);
        let alpha = spec.alpha_star();
        let cells = vec![Cell::parse("0").unwrap(), Cell::parse("1").unwrap()];
        let n = normalize_covering(&spec, &cells, alpha).unwrap();
        assert!((n.cost_before - 1.0).abs() < 1e-12);
        assert!((n.cost_after - 1.0).abs() < 1e-12);
        assert_eq!(n.level, 1);
        assert_eq!(n.level_cells.len(), 2);
    }

    #[test]
    fn normalize_mixed_levels() {
        let spec = third_space(3);
        let alpha = spec.alpha_star();
        let cells = vec![
            Cell::parse("0").unwrap(),
            Cell::parse("10").unwrap(),
            Cell::parse("11").unwrap(),
        ];
        let n = normalize_covering(&spec, &cells, alpha).unwrap();
        // Arithmetic oracle: (1/3)^a + 2 (1/9)^a = 1/2 + 2/4 = 1.
        let direct = (1.0f64 / 3.0).powf(alpha) + 2.0 * (1.0f64 / 9.0).powf(alpha);
        assert!((n.cost_before - direct).abs() < 1e-12);
        assert!((n.cost_before - 1.0).abs() < 1e-12);
        assert!((n.cost_after - n.cost_before).abs() < 1e-12);
        // Normalized to all 4 level-2 cells.
        let mut set: Vec<String> = n.level_cells.iter().map(Cell::to_string).collect();
        set.sort();
        set.dedup();
        assert_eq!(set, vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn whole_space_cell_costs_one_at_critical() {
        let spec = third_space(2);
        let n = normalize_covering(&spec, &[Cell::new(vec![])], spec.alpha_star()).unwrap();
        assert!((n.cost_before - 1.0).abs() < 1e-12);
        assert!((n.cost_after - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_rejects_gaps() {
        let spec = third_space(3);
        let cells = vec![Cell::parse("0").unwrap(), Cell::parse("10").unwrap()];
        match normalize_covering(&spec, &cells, 1.0) {
            Err(Error::NotACovering(prefix)) => assert_eq!(prefix, "11"),
            other => panic!("expected NotACovering, got {other:?}"),
        }
    }

    #[test]
    fn exact_measure_three_regimes() {
        let spec = third_space(3);
        let star = spec.alpha_star();
        let at = exact_measure(&spec, star).unwrap();
        assert_eq!(at.value, ContentValue::finite(1.0));
        assert_eq!(at.regime, CriticalRegime::Critical);
        let above = exact_measure(&spec, 1.0).unwrap();
        assert_eq!(above.value, ContentValue::finite(0.0));
        // Growth-rate oracle: 2^l 3^(-0.3 l) diverges since 0.3 < alpha*.
        let below = exact_measure(&spec, 0.3).unwrap();
        assert_eq!(below.value, ContentValue::Infinite);
        assert!(exact_measure(&spec, -0.1).is_err());
    }

    #[test]
    fn materialize_depth3() {
        let spec = third_space(3);
        let m = materialize(&spec).unwrap();
        assert_eq!(m.atomic.len(), 8);
        for &d in &m.atomic.atom_diam {
            assert!((d - 1.0 / 27.0).abs() < 1e-15);
        }
        let report = m.points.validate().unwrap();
        assert!(report.is_ultrametric);
    }

    #[test]
    fn materialized_content_matches_paper_value() {
        let spec = third_space(3);
        let m = materialize(&spec).unwrap();
        let target: Vec<usize> = (0..m.atomic.len()).collect();
        let est = exact_content(&m.atomic, &target, spec.alpha_star(), Delta::Infinite).unwrap();
        assert!((est.value.expect_finite() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn materialize_respects_limit() {
        let spec = SequenceSpaceSpec::new(2, 0.5, 5).unwrap();
        assert!(matches!(
            materialize_with_limit(&spec, 16),
            Err(Error::TooLarge {
                cells: 32,
                limit: 16
            })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(SequenceSpaceSpec::new(1, 0.5, 3).is_err());
        assert!(SequenceSpaceSpec::new(2, 1.0, 3).is_err());
        assert!(SequenceSpaceSpec::new(2, 0.5, 0).is_err());
        assert!(SequenceSpaceSpec::new(37, 0.5, 1).is_err());
    }

    #[test]
    fn cell_string_round_trip() {
        let c = Cell::parse("01a").unwrap();
        assert_eq!(c.word, vec![0, 1, 10]);
        assert_eq!(c.to_string(), "01a");
        assert!(Cell::parse("0!").is_err());
    }
}
