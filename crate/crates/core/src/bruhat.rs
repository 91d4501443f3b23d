//! The two-flag pairing: a permutation matches the layers of two flags so
//! that one basis is simultaneously new for both chains, giving a common
//! generating set of size exactly d.

use crate::cover::{CompatibleSet, GeneratingSet};
use crate::error::{Error, Result};
use crate::flag::Flag;
use crate::matrix::EchelonBuilder;
use crate::prism::LayerRef;
use crate::subspace::avoid_subspaces;

/// The permutation pairing the layers of an ordered pair of flags:
/// `sigma(i)` is the least `j` such that `U_i \ U_{i-1}` meets `V_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatPerm {
    // map[i-1] = sigma(i), levels 1-based.
    map: Vec<usize>,
}

impl BruhatPerm {
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let d = map.len();
        let mut seen = vec![false; d + 1];
        for &j in &map {
            if j == 0 || j > d || seen[j] {
                return Err(Error::Parse(format!("not a permutation of 1..={d}")));
            }
            seen[j] = true;
        }
        Ok(BruhatPerm { map })
    }

    pub fn identity(d: usize) -> Self {
        BruhatPerm { map: (1..=d).collect() }
    }

    /// The order-reversing permutation `i -> d + 1 - i`.
    pub fn reversal(d: usize) -> Self {
        BruhatPerm { map: (1..=d).rev().collect() }
    }

    pub fn d(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn apply_inv(&self, j: usize) -> usize {
        self.map.iter().position(|&x| x == j).expect("level in range") + 1
    }

    pub fn inverse(&self) -> BruhatPerm {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j - 1] = i + 1;
        }
        BruhatPerm { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| j == i + 1)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

/// `dim(U_i ∩ V_j)` for all `0 <= i, j <= d`, by incremental elimination:
/// for each prefix of U's basis, sweep V's chain one column at a time.
#[allow(clippy::needless_range_loop)] // the indices are the table coordinates
pub fn pair_dim_table(u: &Flag, v: &Flag) -> Result<Vec<Vec<usize>>> {
    check_pair(u, v)?;
    let d = u.d();
    let mut table = vec![vec![0usize; d + 1]; d + 1];
    let mut u_builder = EchelonBuilder::new(d);
    for i in 0..=d {
        if i > 0 {
            u_builder.insert(&u.basis().col(i - 1));
        }
        let mut eb = u_builder.clone();
        for j in 1..=d {
            eb.insert(&v.basis().col(j - 1));
            // dim(U_i ∩ V_j) = i + j - rank [U_i | V_j]
            table[i][j] = i + j - eb.rank();
        }
    }
    Ok(table)
}

/// Compute the pairing permutation from the dimension table: `sigma(i)` is
/// the least `j` where `dim(U_i ∩ V_j)` jumps past `dim(U_{i-1} ∩ V_j)`.
pub fn bruhat_perm(u: &Flag, v: &Flag) -> Result<BruhatPerm> {
    let table = pair_dim_table(u, v)?;
    let d = u.d();
    let map = (1..=d)
        .map(|i| {
            (1..=d)
                .find(|&j| table[i][j] > table[i - 1][j])
                .expect("dim(U_i ∩ V_d) = i always jumps")
        })
        .collect();
    BruhatPerm::from_map(map).map_err(|_| {
        Error::InternalInconsistency("pairing map is not a permutation".into())
    })
}

/// A common generating set of size exactly d: the i-th vector is new for
/// `U_i` and for `V_{sigma(i)}`, found inside their intersection while
/// avoiding both predecessor layers.
pub fn two_flag_generators(u: &Flag, v: &Flag) -> Result<GeneratingSet> {
    let sigma = bruhat_perm(u, v)?;
    let d = u.d();
    let mut sets = Vec::with_capacity(d);
    for i in 1..=d {
        let j = sigma.apply(i);
        let w = u.layer(i).intersect(&v.layer(j))?;
        let below_u = u.layer(i - 1);
        let below_v = v.layer(j - 1);
        let witness = avoid_subspaces(&w, &[&below_u, &below_v]).map_err(|e| {
            Error::InternalInconsistency(format!(
                "no witness for (U{i}, V{j}) though the pairing guarantees one: {e}"
            ))
        })?;
        sets.push(CompatibleSet {
            layers: vec![LayerRef::new(0, i), LayerRef::new(1, j)],
            witness,
        });
    }
    Ok(GeneratingSet { sets })
}

fn check_pair(u: &Flag, v: &Flag) -> Result<()> {
    if u.d() != v.d() {
        return Err(Error::DimensionMismatch(u.d(), v.d()));
    }
    if u.field() != v.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}
