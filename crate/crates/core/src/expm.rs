//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use nalgebra::DMatrix;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled [13/13] approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371920351148152;

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `e^A` for a small square matrix.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm of a non-square matrix");
    let n = a.nrows();
    let norm = norm1(a);
    if norm == 0.0 {
        return DMatrix::identity(n, n);
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let b = &PADE13;
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn taylor(a: &DMatrix<f64>) -> DMatrix<f64> {
        // scaled Taylor series, squared back up
        let s = 10;
        let a = a / 2f64.powi(s);
        let n = a.nrows();
        let mut term = DMatrix::identity(n, n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &a / k as f64;
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn zero_and_diagonal() {
        let z = DMatrix::zeros(4, 4);
        assert_eq!(expm(&z), DMatrix::identity(4, 4));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.3, -2.0, 7.5]));
        let e = expm(&d);
        for (i, x) in [0.3f64, -2.0, 7.5].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() <= 1e-13 * x.exp());
        }
        assert!(e[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn inverse_identity_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-2.0..2.0));
            let prod = expm(&a) * expm(&-&a);
            assert!((prod - DMatrix::identity(3, 3)).norm() < 1e-9);
        }
    }

    #[test]
    fn agrees_with_independent_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 6, 10] {
            for scale in [0.1, 1.0, 20.0] {
                let a = DMatrix::from_fn(n, n, |_, _| scale * rng.gen_range(-1.0..1.0));
                let e = expm(&a);
                assert!(rel_err(&e, &taylor(&a)) < 1e-10, "taylor n={n} scale={scale}");
                assert!(rel_err(&e, &a.clone().exp()) < 1e-10, "nalgebra n={n} scale={scale}");
            }
        }
    }
}
