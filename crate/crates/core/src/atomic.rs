//! Atomically presented spaces: finitely many closed "atoms" carrying
//! per-atom diameters and pairwise inf/sup distance tables. This is the
//! ground model every covering computation runs on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{check_subset, PointSpace};

/// Where an atomic presentation came from. Informational; the covering
/// algorithms never branch on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    IntervalLine,
    CellSpace,
    PointCloud,
    Custom,
}

/// A space presented as atoms with diameter and inf/sup distance data.
///
/// Invariants checked at construction: tables square and symmetric,
/// `inf_dist <= sup_dist`, `inf_dist(i,i) = 0`, `sup_dist(i,i) = atom_diam(i)`,
/// all entries finite and nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAtomicSpace")]
pub struct AtomicSpace {
    pub atom_diam: Vec<f64>,
    pub sup_dist: Vec<Vec<f64>>,
    pub inf_dist: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

/// Wire form of an atomic space; validated on conversion.
#[derive(Deserialize)]
struct RawAtomicSpace {
    atom_diam: Vec<f64>,
    sup_dist: Vec<Vec<f64>>,
    inf_dist: Vec<Vec<f64>>,
    #[serde(default = "default_provenance")]
    provenance: Provenance,
}

fn default_provenance() -> Provenance {
    Provenance::Custom
}

impl TryFrom<RawAtomicSpace> for AtomicSpace {
    type Error = Error;

    fn try_from(raw: RawAtomicSpace) -> Result<Self> {
        AtomicSpace::new(raw.atom_diam, raw.sup_dist, raw.inf_dist, raw.provenance)
    }
}

impl AtomicSpace {
    pub fn new(
        atom_diam: Vec<f64>,
        sup_dist: Vec<Vec<f64>>,
        inf_dist: Vec<Vec<f64>>,
        provenance: Provenance,
    ) -> Result<Self> {
        let n = atom_diam.len();
        if sup_dist.len() != n || inf_dist.len() != n {
            return Err(Error::BadParams(
                "table sizes do not match atom count".into(),
            ));
        }
        for (i, &d) in atom_diam.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::BadParams(format!(
                    "atom {i} has invalid diameter {d}"
                )));
            }
        }
        for (name, table) in [("sup_dist", &sup_dist), ("inf_dist", &inf_dist)] {
            for (i, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::BadParams(format!("{name} row {i} has wrong length")));
                }
                for (j, &d) in row.iter().enumerate() {
                    if !d.is_finite() || d < 0.0 {
                        return Err(Error::NegativeEntry(i, j));
                    }
                    if (d - table[j][i]).abs() > 1e-9 * d.abs().max(1.0) {
                        return Err(Error::NonSymmetric(i, j));
                    }
                }
            }
        }
        for i in 0..n {
            if inf_dist[i][i] != 0.0 {
                return Err(Error::BadParams(format!("inf_dist({i},{i}) must be 0")));
            }
            if (sup_dist[i][i] - atom_diam[i]).abs() > 1e-9 * atom_diam[i].max(1.0) {
                return Err(Error::BadParams(format!(
                    "sup_dist({i},{i}) must equal atom_diam({i})"
                )));
            }
            for j in 0..n {
                if inf_dist[i][j] > sup_dist[i][j] * (1.0 + 1e-9) + 1e-300 {
                    return Err(Error::BadParams(format!(
                        "inf_dist({i},{j}) exceeds sup_dist({i},{j})"
                    )));
                }
            }
        }
        Ok(AtomicSpace {
            atom_diam,
            sup_dist,
            inf_dist,
            provenance,
        })
    }

    /// Present a point space as singleton atoms: zero diameters and
    /// `inf = sup = d(x, y)`.
    pub fn from_point_space(space: &PointSpace) -> Self {
        let n = space.len();
        let table: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| space.dist(i, j)).collect())
            .collect();
        AtomicSpace {
            atom_diam: vec![0.0; n],
            sup_dist: table.clone(),
            inf_dist: table,
            provenance: Provenance::PointCloud,
        }
    }

    pub fn len(&self) -> usize {
        self.atom_diam.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atom_diam.is_empty()
    }

    /// Diameter of a block of atoms: the larger of the biggest atom
    /// diameter and the biggest pairwise sup-distance. Monotone under
    /// block enlargement by construction.
    pub fn block_diam(&self, block: &[usize]) -> f64 {
        let mut d = 0.0_f64;
        for (a, &i) in block.iter().enumerate() {
            d = d.max(self.atom_diam[i]);
            for &j in &block[a + 1..] {
                d = d.max(self.sup_dist[i][j]);
            }
        }
        d
    }

    /// Smallest inf-distance between two atom groups.
    pub fn group_inf_dist(&self, a: &[usize], b: &[usize]) -> f64 {
        let mut d = f64::INFINITY;
        for &i in a {
            for &j in b {
                d = d.min(self.inf_dist[i][j]);
            }
        }
        d
    }

    pub(crate) fn check_target(&self, target: &[usize]) -> Result<()> {
        check_subset(target, self.len())
    }

    /// Pointwise power of every diameter and distance entry. The caller
    /// is responsible for the exponent range (see `transforms::snowflake`).
    pub(crate) fn powered(&self, t: f64) -> AtomicSpace {
        let pow_tab = |tab: &Vec<Vec<f64>>| {
            tab.iter()
                .map(|row| row.iter().map(|d| d.powf(t)).collect())
                .collect()
        };
        AtomicSpace {
            atom_diam: self.atom_diam.iter().map(|d| d.powf(t)).collect(),
            sup_dist: pow_tab(&self.sup_dist),
            inf_dist: pow_tab(&self.inf_dist),
            provenance: self.provenance,
        }
    }
}
