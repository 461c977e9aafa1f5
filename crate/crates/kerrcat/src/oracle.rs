//! Brute-force propagation of the full atom-field Hamiltonian, used to check
//! the closed-form evolution.
//!
//! The Hamiltonian `w0 a^dag a + w_eg sz/2 + chi a^dag^2 a^2 + Omega (a^dag s- + a s+)`
//! is real symmetric in the product basis, so it is diagonalized once and
//! exponentiated through its spectrum. The free part `w0 (a^dag a + sz/2)`
//! is then undone to land in the same frame as the closed form.

use kerrcat_core::{dynamics::JointState, CMatrix, FieldState, ModelParams, C64};
use nalgebra::{DMatrix, SymmetricEigen};

/// Largest truncation the dense oracle accepts.
pub const ORACLE_MAX_N: usize = 64;

/// Cavity frequency used when the parameters carry none; any value works
/// because the free part is removed again.
const DEFAULT_CAVITY: f64 = 3.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("oracle truncation {n_max} exceeds the limit {limit}")]
    TooLarge { n_max: usize, limit: usize },
}

/// `|e,k> -> 2k`, `|g,k> -> 2k + 1`.
fn idx(excited: bool, k: usize) -> usize { 2 * k + usize::from(!excited) }

fn hamiltonian(p: &ModelParams, levels: usize) -> (DMatrix<f64>, f64) {
    let w0 = if p.carriers().is_some() { p.cavity_frequency() } else { DEFAULT_CAVITY };
    let weg = w0 + p.detuning();
    let chi = p.kerr();
    let dim = 2 * levels;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..levels {
        let kf = k as f64;
        let kerr = chi * kf * (kf - 1.0);
        h[(idx(true, k), idx(true, k))] = w0 * kf + 0.5 * weg + kerr;
        h[(idx(false, k), idx(false, k))] = w0 * kf - 0.5 * weg + kerr;
        if k + 1 < levels {
            // a s+ |g,k+1> = sqrt(k+1) |e,k>
            let c = p.coupling() * (kf + 1.0).sqrt();
            h[(idx(true, k), idx(false, k + 1))] = c;
            h[(idx(false, k + 1), idx(true, k))] = c;
        }
    }
    (h, w0)
}

/// Joint state at time `t` for an excited atom and field `rho0`, from dense
/// diagonalization. The field space is extended by one level so that every
/// retained manifold `{|e,n>, |g,n+1>}` is complete.
pub fn hamiltonian_oracle(rho0: &FieldState, t: f64, p: &ModelParams) -> Result<JointState, OracleError> {
    let n_max = rho0.n_max();
    if n_max > ORACLE_MAX_N {
        return Err(OracleError::TooLarge { n_max, limit: ORACLE_MAX_N });
    }
    let levels = n_max + 2;
    let dim = 2 * levels;
    let (h, w0) = hamiltonian(p, levels);
    let eig = SymmetricEigen::new(h);
    let v = eig.eigenvectors;

    // U = V e^{-i L t} V^T, then the free-part phase e^{+i w0 (k + sz/2) t}
    let mut u = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for (l, lambda) in eig.eigenvalues.iter().enumerate() {
                acc += C64::from_polar(v[(i, l)] * v[(j, l)], -lambda * t);
            }
            u[i * dim + j] = acc;
        }
    }
    for k in 0..levels {
        for (excited, s) in [(true, 0.5), (false, -0.5)] {
            let phase = C64::from_polar(1.0, w0 * (k as f64 + s) * t);
            let row = idx(excited, k);
            for j in 0..dim {
                u[row * dim + j] *= phase;
            }
        }
    }

    // rho0 lives in the |e> block: only columns 2m of U contribute
    let d = n_max + 1;
    let mut ur = vec![C64::new(0.0, 0.0); dim * d];
    for i in 0..dim {
        for m in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..d {
                acc += u[i * dim + idx(true, n)] * rho0.get(n, m);
            }
            ur[i * d + m] = acc;
        }
    }
    let element = |i: usize, j: usize| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..d {
            acc += ur[i * d + m] * u[j * dim + idx(true, m)].conj();
        }
        acc
    };
    let block = |a: bool, b: bool| CMatrix::from_fn(d, |n, m| element(idx(a, n), idx(b, m)));
    Ok(JointState { ee: block(true, true), eg: block(true, false), ge: block(false, true), gg: block(false, false) })
}
