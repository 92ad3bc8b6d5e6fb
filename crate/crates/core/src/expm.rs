//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham 2005).
//!
//! The same kernel serves the real label-space rotations and the Fock-space
//! blocks; it is generic over any `nalgebra` scalar with `f64` moduli.

use nalgebra::{ComplexField, DMatrix};

/// Largest 1-norm for which the degree-m approximant reaches unit roundoff.
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
    (13, 5.371_920_351_148_152),
];

/// Coefficients of the degree-m diagonal Padé numerator,
/// `b_j = (2m−j)! m! / ((2m)! j! (m−j)!)`.
fn pade_coefficients(m: usize) -> Vec<f64> {
    let mut b = vec![1.0; m + 1];
    for j in 1..=m {
        b[j] = b[j - 1] * (m + 1 - j) as f64 / (j as f64 * (2 * m + 1 - j) as f64);
    }
    b
}

fn one_norm<T>(a: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64> + Copy,
{
    a.column_iter()
        .map(|col| col.iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a square matrix.
///
/// # Panics
/// Panics if `a` is not square.
pub fn expm<T>(a: &DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }

    let norm = one_norm(a);
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            return pade_low(a, m);
        }
    }

    let theta13 = THETA[4].1;
    let squarings = if norm > theta13 {
        (norm / theta13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.unscale(2f64.powi(squarings));
    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn scalar<T: ComplexField<RealField = f64>>(x: f64) -> T {
    T::from_real(x)
}

/// Solves `(V − U) X = V + U`.
fn pade_quotient<T>(u: DMatrix<T>, v: DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let numerator = &v + &u;
    let denominator = v - u;
    denominator
        .lu()
        .solve(&numerator)
        .expect("Padé denominator is nonsingular within the theta bounds")
}

fn pade_low<T>(a: &DMatrix<T>, m: usize) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    let b = pade_coefficients(m);
    let eye = DMatrix::<T>::identity(n, n);
    let a2 = a * a;

    // Even powers I, A², A⁴, ... up to A^{m−1}.
    let mut powers = vec![eye];
    for k in 1..=(m - 1) / 2 {
        let next = &powers[k - 1] * &a2;
        powers.push(next);
    }

    let mut odd = DMatrix::<T>::zeros(n, n);
    let mut even = DMatrix::<T>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        odd += p * scalar::<T>(b[2 * k + 1]);
        even += p * scalar::<T>(b[2 * k]);
    }
    pade_quotient(a * odd, even)
}

fn pade13<T>(a: &DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    let b = pade_coefficients(13);
    let eye = DMatrix::<T>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let s = |x: f64| scalar::<T>(x);

    let w1 = &a6 * s(b[13]) + &a4 * s(b[11]) + &a2 * s(b[9]);
    let w2 = &a6 * &w1 + &a6 * s(b[7]) + &a4 * s(b[5]) + &a2 * s(b[3]) + &eye * s(b[1]);
    let u = a * w2;

    let z1 = &a6 * s(b[12]) + &a4 * s(b[10]) + &a2 * s(b[8]);
    let v = &a6 * z1 + &a6 * s(b[6]) + &a4 * s(b[4]) + &a2 * s(b[2]) + eye * s(b[0]);
    pade_quotient(u, v)
}
