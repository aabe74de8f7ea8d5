//! Correlation functions, magnetization, total spin and two-site reduced
//! density matrices, by direct summation over the sector basis.
//!
//! The `*_between` forms evaluate the symmetric bilinear form ⟨a|O|b⟩ of
//! each observable; the plain forms are the expectation value ⟨ψ|O|ψ⟩.

use nalgebra::Matrix4;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::hamiltonian::{apply_s2, StateVector};

fn check_site(state: &StateVector, i: usize) -> Result<()> {
    let n = state.num_sites();
    if i >= n {
        return Err(Error::InvalidSite {
            site: i,
            num_sites: n,
        });
    }
    Ok(())
}

fn check_pair(state: &StateVector, i: usize, j: usize) -> Result<()> {
    let n = state.num_sites();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidPair { i, j, num_sites: n });
    }
    Ok(())
}

/// Γ_ij = ⟨S_i^z S_j^z⟩.
pub fn gamma(state: &StateVector, i: usize, j: usize) -> Result<f64> {
    check_pair(state, i, j)?;
    Ok(gamma_between(
        state.basis(),
        state.amps(),
        state.amps(),
        i,
        j,
    ))
}

pub fn gamma_between(basis: &SectorBasis, a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
    let mask = 1u32 << i | 1u32 << j;
    basis
        .configs()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&w, (x, y))| {
            let bits = w & mask;
            let aligned = bits == 0 || bits == mask;
            if aligned {
                0.25 * x * y
            } else {
                -0.25 * x * y
            }
        })
        .sum()
}

/// z_ij = ⟨S_j^+ S_i^-⟩: configurations with site i down and j up,
/// paired with their exchanged partner.
pub fn offdiag(state: &StateVector, i: usize, j: usize) -> Result<f64> {
    check_pair(state, i, j)?;
    Ok(offdiag_between(
        state.basis(),
        state.amps(),
        state.amps(),
        i,
        j,
    ))
}

pub fn offdiag_between(basis: &SectorBasis, a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
    let (bi, bj) = (1u32 << i, 1u32 << j);
    let mut sum = 0.0;
    for (k, &w) in basis.configs().iter().enumerate() {
        if w & bi != 0 && w & bj == 0 {
            let partner = basis.index_unchecked(w ^ bi ^ bj);
            sum += 0.5 * (a[partner] * b[k] + b[partner] * a[k]);
        }
    }
    sum
}

/// ⟨S_i^z⟩.
pub fn local_sz(state: &StateVector, i: usize) -> Result<f64> {
    check_site(state, i)?;
    Ok(local_sz_between(
        state.basis(),
        state.amps(),
        state.amps(),
        i,
    ))
}

pub fn local_sz_between(basis: &SectorBasis, a: &[f64], b: &[f64], i: usize) -> f64 {
    basis
        .configs()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&w, (x, y))| SectorBasis::site_sz(w, i) * x * y)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalSpin {
    /// S solving ⟨S²⟩ = S(S+1).
    pub s: f64,
    pub s2: f64,
    /// ⟨S⁴⟩ − ⟨S²⟩².
    pub variance: f64,
}

impl TotalSpin {
    pub const EIGEN_TOL: f64 = 1e-8;

    pub fn is_eigenstate(&self) -> bool {
        self.variance <= Self::EIGEN_TOL
    }
}

/// Total spin of a normalized state.
pub fn total_spin(state: &StateVector) -> TotalSpin {
    let s2v = apply_s2(state);
    let s2 = state.dot(&s2v);
    let s4 = s2v.dot(&s2v);
    let s = (-1.0 + (1.0 + 4.0 * s2.max(0.0)).sqrt()) / 2.0;
    TotalSpin {
        s,
        s2,
        variance: (s4 - s2 * s2).max(0.0),
    }
}

/// Two-site reduced density matrix with S^z conservation, in the basis
/// |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ (first arrow site i, second site j):
///
/// ```text
/// [ v   0   0   0 ]
/// [ 0   w1  z   0 ]
/// [ 0   z   w2  0 ]
/// [ 0   0   0   u ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDensityMatrix {
    /// Both down.
    pub u: f64,
    /// Both up.
    pub v: f64,
    /// i up, j down.
    pub w1: f64,
    /// i down, j up.
    pub w2: f64,
    pub z: f64,
}

impl PairDensityMatrix {
    pub const DIAG_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const PSD_TOL: f64 = 1e-10;

    pub fn trace(&self) -> f64 {
        self.u + self.v + self.w1 + self.w2
    }

    /// Checks trace one, non-negative diagonal, and PSD of the inner block.
    pub fn validate(&self) -> Result<()> {
        let fields = [self.u, self.v, self.w1, self.w2, self.z];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite element".into()));
        }
        if [self.u, self.v, self.w1, self.w2]
            .iter()
            .any(|&d| d < -Self::DIAG_TOL)
        {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative diagonal in {self:?}"
            )));
        }
        if (self.trace() - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} != 1",
                self.trace()
            )));
        }
        if self.w1 * self.w2 - self.z * self.z < -Self::PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not positive semidefinite: w1*w2 - z^2 = {}",
                self.w1 * self.w2 - self.z * self.z
            )));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        Matrix4::new(
            self.v, 0.0, 0.0, 0.0, //
            0.0, self.w1, self.z, 0.0, //
            0.0, self.z, self.w2, 0.0, //
            0.0, 0.0, 0.0, self.u,
        )
    }

    /// Weighted mixture of several RDMs.
    pub fn mix(parts: &[(f64, PairDensityMatrix)]) -> PairDensityMatrix {
        parts.iter().fold(
            PairDensityMatrix {
                u: 0.0,
                v: 0.0,
                w1: 0.0,
                w2: 0.0,
                z: 0.0,
            },
            |acc, (p, r)| PairDensityMatrix {
                u: acc.u + p * r.u,
                v: acc.v + p * r.v,
                w1: acc.w1 + p * r.w1,
                w2: acc.w2 + p * r.w2,
                z: acc.z + p * r.z,
            },
        )
    }

    /// Assembles the matrix from Γ, ⟨S_i^z⟩, ⟨S_j^z⟩, z and the norm.
    pub fn from_scalars(norm: f64, gamma: f64, sz_i: f64, sz_j: f64, z: f64) -> Self {
        let quarter = 0.25 * norm;
        PairDensityMatrix {
            u: quarter - 0.5 * (sz_i + sz_j) + gamma,
            v: quarter + 0.5 * (sz_i + sz_j) + gamma,
            w1: quarter + 0.5 * (sz_i - sz_j) - gamma,
            w2: quarter - 0.5 * (sz_i - sz_j) - gamma,
            z,
        }
    }
}

/// Reduced density matrix of sites i, j from the five scalar observables.
pub fn pair_rdm(state: &StateVector, i: usize, j: usize) -> Result<PairDensityMatrix> {
    check_pair(state, i, j)?;
    Ok(pair_rdm_between(
        state.basis(),
        state.amps(),
        state.amps(),
        i,
        j,
    ))
}

/// Bilinear form of the RDM; `a == b` gives the state's RDM.
pub fn pair_rdm_between(
    basis: &SectorBasis,
    a: &[f64],
    b: &[f64],
    i: usize,
    j: usize,
) -> PairDensityMatrix {
    let norm = crate::hamiltonian::dot(a, b);
    PairDensityMatrix::from_scalars(
        norm,
        gamma_between(basis, a, b, i, j),
        local_sz_between(basis, a, b, i),
        local_sz_between(basis, a, b, j),
        offdiag_between(basis, a, b, i, j),
    )
}

/// Literal partial trace over all sites except i and j, as a full 4×4
/// matrix in the |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ basis.
pub fn partial_trace(state: &StateVector, i: usize, j: usize) -> Result<Matrix4<f64>> {
    check_pair(state, i, j)?;
    let basis = state.basis();
    let amps = state.amps();
    let (bi, bj) = (1u32 << i, 1u32 << j);
    let local = |w: u32| -> usize { (usize::from(w & bi != 0) << 1) | usize::from(w & bj != 0) };
    let mut rho = Matrix4::zeros();
    for (k, &w) in basis.configs().iter().enumerate() {
        let rest = w & !(bi | bj);
        // every local configuration compatible with the sector
        for s in 0..4u32 {
            let partner = rest | if s & 2 != 0 { bi } else { 0 } | if s & 1 != 0 { bj } else { 0 };
            if partner.count_ones() as usize != basis.num_down() {
                continue;
            }
            let kp = basis.index_unchecked(partner);
            rho[(local(w), local(partner))] += amps[k] * amps[kp];
        }
    }
    Ok(rho)
}
