//! Matrix-free Heisenberg Hamiltonian H = Σ_bonds S_i·S_j (J = 1) and
//! total spin S² inside one S^z sector.
//!
//! The product is a gather: each output amplitude is assembled from the
//! input amplitudes of the configurations it connects to, in a fixed bond
//! order. Outputs never share accumulators, so results are bit-identical
//! for any thread count.

use std::sync::Arc;

use crate::basis::SectorBasis;
use crate::cluster::ClusterGraph;
use crate::error::{Error, Result};

/// Real amplitudes over a sector basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amps: Vec<f64>,
}

impl StateVector {
    pub fn new(basis: Arc<SectorBasis>, amps: Vec<f64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: amps.len(),
            });
        }
        if let Some(bad) = amps.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "amplitude {bad} is not finite"
            )));
        }
        Ok(StateVector { basis, amps })
    }

    pub fn zeros(basis: Arc<SectorBasis>) -> Self {
        let amps = vec![0.0; basis.dim()];
        StateVector { basis, amps }
    }

    /// Single configuration state.
    pub fn basis_state(basis: Arc<SectorBasis>, word: u32) -> Result<Self> {
        let k = basis.index_of(word)?;
        let mut v = Self::zeros(basis);
        v.amps[k] = 1.0;
        Ok(v)
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [f64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<f64> {
        self.amps
    }

    pub fn num_sites(&self) -> usize {
        self.basis.num_sites()
    }

    pub fn dot(&self, other: &StateVector) -> f64 {
        dot(&self.amps, &other.amps)
    }

    pub fn norm(&self) -> f64 {
        dot(&self.amps, &self.amps).sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
        self
    }

    /// `a·self + b·other`, same basis assumed.
    pub fn combine(&self, a: f64, other: &StateVector, b: f64) -> StateVector {
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| a * x + b * y)
            .collect();
        StateVector {
            basis: Arc::clone(&self.basis),
            amps,
        }
    }

    /// Relabels sites by `perm` (site i of `self` becomes site perm[i]).
    pub fn permute_sites(&self, perm: &[usize]) -> Result<StateVector> {
        let n = self.num_sites();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut out = StateVector::zeros(Arc::clone(&self.basis));
        for (&w, &a) in self.basis.configs().iter().zip(&self.amps) {
            let mapped = (0..n)
                .filter(|&i| w >> i & 1 == 1)
                .fold(0u32, |acc, i| acc | 1 << perm[i]);
            out.amps[self.basis.index_unchecked(mapped)] = a;
        }
        Ok(out)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A real symmetric linear map on sector amplitudes.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Heisenberg Hamiltonian of a cluster restricted to one sector.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    basis: Arc<SectorBasis>,
    /// One two-bit mask per bond.
    bond_masks: Vec<u32>,
}

#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 4096;

impl Hamiltonian {
    pub fn new(graph: &ClusterGraph, basis: Arc<SectorBasis>) -> Result<Self> {
        if graph.num_sites() != basis.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: basis.num_sites(),
                got: graph.num_sites(),
            });
        }
        let bond_masks = graph
            .edges()
            .iter()
            .map(|&(a, b)| 1u32 << a | 1u32 << b)
            .collect();
        Ok(Hamiltonian { basis, bond_masks })
    }

    /// Interaction between every pair of sites; H = (S² − 3N/4)/2.
    pub fn all_pairs(basis: Arc<SectorBasis>) -> Self {
        let n = basis.num_sites();
        let bond_masks = crate::cluster::all_pairs(n)
            .map(|(a, b)| 1u32 << a | 1u32 << b)
            .collect();
        Hamiltonian { basis, bond_masks }
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    #[inline]
    fn row(&self, k: usize, x: &[f64]) -> f64 {
        let w = self.basis.configs()[k];
        let mut diag = 0.0;
        let mut off = 0.0;
        for &mask in &self.bond_masks {
            let bits = w & mask;
            if bits == 0 || bits == mask {
                diag += 0.25;
            } else {
                diag -= 0.25;
                off += x[self.basis.index_unchecked(w ^ mask)];
            }
        }
        diag * x[k] + 0.5 * off
    }

    fn apply_slice(&self, x: &[f64], y: &mut [f64]) {
        #[cfg(feature = "parallel")]
        if y.len() >= PAR_THRESHOLD {
            use rayon::prelude::*;
            const CHUNK: usize = 1024;
            y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
                for (off, yk) in out.iter_mut().enumerate() {
                    *yk = self.row(c * CHUNK + off, x);
                }
            });
            return;
        }
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = self.row(k, x);
        }
    }

    /// w = H v.
    pub fn apply_h(&self, v: &StateVector) -> Result<StateVector> {
        self.check(v)?;
        let mut out = StateVector::zeros(Arc::clone(&self.basis));
        self.apply_slice(&v.amps, &mut out.amps);
        Ok(out)
    }

    fn check(&self, v: &StateVector) -> Result<()> {
        if v.amps.len() != self.basis.dim() || v.basis.num_sites() != self.basis.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                got: v.amps.len(),
            });
        }
        Ok(())
    }

    /// Diagonal element ⟨c|H|c⟩ of configuration index `k`.
    pub fn diagonal(&self, k: usize) -> f64 {
        let w = self.basis.configs()[k];
        self.bond_masks
            .iter()
            .map(|&m| {
                let bits = w & m;
                if bits == 0 || bits == m {
                    0.25
                } else {
                    -0.25
                }
            })
            .sum()
    }
}

impl LinearOperator for Hamiltonian {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_slice(x, y);
    }
}

/// w = H v for the cluster's Hamiltonian.
pub fn apply_h(graph: &ClusterGraph, v: &StateVector) -> Result<StateVector> {
    Hamiltonian::new(graph, Arc::clone(v.basis()))?.apply_h(v)
}

/// w = S² v, computed as 2·H_complete v + (3N/4) v.
pub fn apply_s2(v: &StateVector) -> StateVector {
    let n = v.num_sites() as f64;
    let h = Hamiltonian::all_pairs(Arc::clone(v.basis()));
    let mut out = StateVector::zeros(Arc::clone(v.basis()));
    h.apply_slice(&v.amps, &mut out.amps);
    for (o, a) in out.amps.iter_mut().zip(&v.amps) {
        *o = 2.0 * *o + 0.75 * n * a;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{chain, complete, preset};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(basis: &Arc<SectorBasis>, rng: &mut ChaCha8Rng) -> StateVector {
        let amps = (0..basis.dim())
            .map(|_| rng.random::<f64>() - 0.5)
            .collect();
        StateVector::new(Arc::clone(basis), amps).unwrap()
    }

    fn two_site(amps: [f64; 2]) -> (ClusterGraph, StateVector) {
        let g = chain(2).unwrap();
        let b = Arc::new(SectorBasis::new(2, 1).unwrap());
        (g, StateVector::new(b, amps.to_vec()).unwrap())
    }

    #[test]
    fn singlet_and_triplet() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (g, singlet) = two_site([s, -s]);
        let hv = apply_h(&g, &singlet).unwrap();
        for (a, b) in hv.amps().iter().zip(singlet.amps()) {
            assert!((a + 0.75 * b).abs() < 1e-15);
        }
        let s2 = apply_s2(&singlet);
        assert!(s2.amps().iter().all(|a| a.abs() < 1e-15));

        let (g, triplet) = two_site([s, s]);
        let hv = apply_h(&g, &triplet).unwrap();
        for (a, b) in hv.amps().iter().zip(triplet.amps()) {
            assert!((a - 0.25 * b).abs() < 1e-15);
        }
        let s2 = apply_s2(&triplet);
        for (a, b) in s2.amps().iter().zip(triplet.amps()) {
            assert!((a - 2.0 * b).abs() < 1e-15);
        }
    }

    #[test]
    fn dicke_is_maximal_spin() {
        let b = Arc::new(SectorBasis::new(4, 2).unwrap());
        let v = StateVector::new(Arc::clone(&b), vec![1.0 / 6f64.sqrt(); 6]).unwrap();
        let s2 = apply_s2(&v);
        for (a, x) in s2.amps().iter().zip(v.amps()) {
            assert!((a - 6.0 * x).abs() < 1e-14);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let g = chain(4).unwrap();
        let b = Arc::new(SectorBasis::new(3, 1).unwrap());
        assert!(apply_h(&g, &StateVector::zeros(b)).is_err());
        assert!(StateVector::new(Arc::new(SectorBasis::new(3, 1).unwrap()), vec![0.0; 2]).is_err());
    }

    #[test]
    fn symmetric_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["chain:10", "tri:10", "tictactoe:12", "davidstar:12"] {
            let g = preset(name).unwrap();
            let b = Arc::new(SectorBasis::new(g.num_sites(), g.num_sites() / 2).unwrap());
            let h = Hamiltonian::new(&g, Arc::clone(&b)).unwrap();
            let x = random_state(&b, &mut rng);
            let y = random_state(&b, &mut rng);
            let lhs = x.dot(&h.apply_h(&y).unwrap());
            let rhs = h.apply_h(&x).unwrap().dot(&y);
            assert!((lhs - rhs).abs() < 1e-12, "{name}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn commutes_with_total_spin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["tri:10", "chain:9"] {
            let g = preset(name).unwrap();
            let n = g.num_sites();
            for m in [n / 2, 2] {
                let b = Arc::new(SectorBasis::new(n, m).unwrap());
                let v = random_state(&b, &mut rng);
                let h = Hamiltonian::new(&g, Arc::clone(&b)).unwrap();
                let a = h.apply_h(&apply_s2(&v)).unwrap();
                let c = apply_s2(&h.apply_h(&v).unwrap());
                let diff = a.combine(1.0, &c, -1.0).norm();
                assert!(diff < 1e-10, "{name} m={m}: {diff}");
            }
        }
    }

    #[test]
    fn chain_translation_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10;
        let g = chain(n).unwrap();
        let b = Arc::new(SectorBasis::new(n, 5).unwrap());
        let v = random_state(&b, &mut rng);
        let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let a = apply_h(&g, &v.permute_sites(&shift).unwrap()).unwrap();
        let c = apply_h(&g, &v).unwrap().permute_sites(&shift).unwrap();
        assert!(a.combine(1.0, &c, -1.0).norm() < 1e-12);
    }

    #[test]
    fn complete_graph_relation() {
        // H_complete = (S² − 3N/4)/2 on a random vector
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = complete(6).unwrap();
        let b = Arc::new(SectorBasis::new(6, 3).unwrap());
        let v = random_state(&b, &mut rng);
        let hv = apply_h(&g, &v).unwrap();
        let s2 = apply_s2(&v);
        for ((h, s), x) in hv.amps().iter().zip(s2.amps()).zip(v.amps()) {
            assert!((h - (s - 4.5 * x) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let g = preset("square:4x4").unwrap();
        let b = Arc::new(SectorBasis::new(16, 8).unwrap());
        let h = Hamiltonian::new(&g, Arc::clone(&b)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_state(&b, &mut rng);
        let fast = h.apply_h(&v).unwrap();
        let slow: Vec<f64> = (0..b.dim()).map(|k| h.row(k, v.amps())).collect();
        assert_eq!(fast.amps(), &slow[..]);
    }
}
