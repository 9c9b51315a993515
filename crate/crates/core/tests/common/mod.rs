//! Test-side oracles. These avoid the library's eigensolver so that checks
//! against them are genuinely two-route.
#![allow(dead_code)]

use qmeasure::{ComplexMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Plain triple-loop product.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut out = ComplexMatrix::zeros(n, b.cols());
    for i in 0..n {
        for j in 0..b.cols() {
            let mut s = c(0.0, 0.0);
            for k in 0..a.cols() {
                s += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

pub fn frob(m: &ComplexMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `Re tr(ρ m)` by explicit index sums.
pub fn expectation(rho: &ComplexMatrix, m: &ComplexMatrix) -> f64 {
    let n = rho.rows();
    let mut s = c(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += rho[(i, k)] * m[(k, i)];
        }
    }
    s.re
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut d = c(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[r][k] -= f * v;
            }
        }
    }
    d
}

/// Positive semidefiniteness by Sylvester's criterion over every principal
/// minor, with slack `tol` per minor.
pub fn psd_by_minors(m: &ComplexMatrix, tol: f64) -> bool {
    let n = m.rows();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut sub = ComplexMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                sub[(a, b)] = m[(i, j)];
            }
        }
        if det(&sub).re < -tol {
            return false;
        }
    }
    true
}

/// Qubit PSD square root `(M + √det I) / √(tr M + 2√det)`.
pub fn qubit_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let s = det(m).re.max(0.0).sqrt();
    let t = (m.trace().re + 2.0 * s).sqrt();
    let mut out = m.clone();
    out[(0, 0)] += c(s, 0.0);
    out[(1, 1)] += c(s, 0.0);
    out.scale_real(1.0 / t)
}

/// `√a b √a` from a supplied square root.
pub fn sandwich_with(root: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    matmul(&matmul(root, b), root)
}

/// Prints one pass/fail line and hands back the verdict.
pub fn report(name: &str, pass: bool, detail: impl AsRef<str>) -> bool {
    println!("{} {name}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    pass
}
