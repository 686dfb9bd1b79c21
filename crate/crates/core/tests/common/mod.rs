//! Test-only reference implementations.
//!
//! Nothing here calls into the library's linear algebra. Matrices are plain
//! `Vec<Vec<Complex64>>`, Gibbs states come from a Taylor-series matrix
//! exponential, and spectra from cyclic Jacobi on the real symmetric
//! embedding `[[X, −Y], [Y, X]]` of `X + iY`.

#![allow(dead_code)]

use num_complex::Complex64;
use thermowork::Operator;

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn to_mat(op: &Operator) -> Mat {
    (0..op.dim())
        .map(|i| (0..op.dim()).map(|j| op.get(i, j)).collect())
        .collect()
}

pub fn from_mat(m: &Mat) -> Operator {
    Operator::from_fn(m.len(), |i, j| m[i][j])
}

pub fn zeros(n: usize) -> Mat {
    vec![vec![c(0.0); n]; n]
}

pub fn eye(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn scale(a: &Mat, s: f64) -> Mat {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

pub fn trace(a: &Mat) -> Complex64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `Tr_B`, written straight from `⟨i j|ρ|k j⟩`.
pub fn trace_out_b(rho: &Mat, d_a: usize, d_b: usize) -> Mat {
    let mut out = zeros(d_a);
    for i in 0..d_a {
        for k in 0..d_a {
            for j in 0..d_b {
                out[i][k] += rho[i * d_b + j][k * d_b + j];
            }
        }
    }
    out
}

/// `Tr_A`.
pub fn trace_out_a(rho: &Mat, d_a: usize, d_b: usize) -> Mat {
    let mut out = zeros(d_b);
    for i in 0..d_b {
        for k in 0..d_b {
            for j in 0..d_a {
                out[i][k] += rho[j * d_b + i][j * d_b + k];
            }
        }
    }
    out
}

/// `e^A` by scaling and squaring with a 30-term Taylor series.
pub fn expm(a: &Mat) -> Mat {
    let n = a.len();
    let norm: f64 = a
        .iter()
        .map(|r| r.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut s = 1.0;
    while norm * s > 0.5 {
        s *= 0.5;
        squarings += 1;
    }
    let x = scale(a, s);
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..=30 {
        term = scale(&matmul(&term, &x), 1.0 / k as f64);
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// `e^{−H/T}/Z`.
pub fn gibbs(h: &Mat, t: f64) -> Mat {
    let e = expm(&scale(h, -1.0 / t));
    let z = trace(&e).re;
    scale(&e, 1.0 / z)
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi.
pub fn eigenvalues(h: &Mat) -> Vec<f64> {
    let n = h.len();
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i][j];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = cs * akp - sn * akq;
                    row[q] = sn * akp + cs * akq;
                }
                let (rp, rq) = (a[p].clone(), a[q].clone());
                for k in 0..m {
                    a[p][k] = cs * rp[k] - sn * rq[k];
                    a[q][k] = sn * rp[k] + cs * rq[k];
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    // Every eigenvalue of the embedding appears twice.
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub fn entropy(rho: &Mat) -> f64 {
    eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > 1e-300)
        .map(|l| -l * l.ln())
        .sum()
}

pub fn free_energy(rho: &Mat, h: &Mat, t: f64) -> f64 {
    trace(&matmul(h, rho)).re - t * entropy(rho)
}

/// All report fields of one protocol run at `t > 0`, from definitions only.
#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub work: f64,
    pub work_local_only: f64,
    pub bound: f64,
    pub efficiency: f64,
    pub delta_f_a: f64,
    pub delta_f_b: f64,
    pub mi_term: f64,
    pub hi_t2: f64,
    pub hi_t3: f64,
}

pub fn protocol(h_a: &Mat, h_b: &Mat, h_i: &Mat, t: f64) -> OracleReport {
    let (d_a, d_b) = (h_a.len(), h_b.len());
    let h_s = add(&add(&kron(h_a, &eye(d_b)), &kron(&eye(d_a), h_b)), h_i);
    let rho_a = gibbs(h_a, t);
    let rho_b = gibbs(h_b, t);
    let rho_s = gibbs(&h_s, t);
    let red_a = trace_out_b(&rho_s, d_a, d_b);
    let red_b = trace_out_a(&rho_s, d_a, d_b);
    let delta_f_a = free_energy(&red_a, h_a, t) - free_energy(&rho_a, h_a, t);
    let delta_f_b = free_energy(&red_b, h_b, t) - free_energy(&rho_b, h_b, t);
    let mi = entropy(&red_a) + entropy(&red_b) - entropy(&rho_s);
    let hi_t2 = trace(&matmul(h_i, &kron(&rho_a, &rho_b))).re;
    let hi_t3 = trace(&matmul(h_i, &rho_s)).re;
    let work = delta_f_a + delta_f_b + t * mi;
    OracleReport {
        work,
        work_local_only: delta_f_a + delta_f_b,
        bound: hi_t2 - hi_t3,
        efficiency: work / (hi_t2 - hi_t3),
        delta_f_a,
        delta_f_b,
        mi_term: t * mi,
        hi_t2,
        hi_t3,
    }
}

pub fn sigma_z_half() -> Mat {
    vec![vec![c(0.5), c(0.0)], vec![c(0.0), c(-0.5)]]
}

pub fn sigma_x() -> Mat {
    vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]
}

/// `H_A = H_B = σ_z/2`, `H_I = g σ_x ⊗ σ_x`.
pub fn two_qubit(g: f64) -> (Mat, Mat, Mat) {
    (
        sigma_z_half(),
        sigma_z_half(),
        scale(&kron(&sigma_x(), &sigma_x()), g),
    )
}
