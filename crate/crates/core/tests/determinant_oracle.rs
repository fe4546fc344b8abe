use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpm_core::hankel::{determinant, SquareMatrix};
use rpm_core::MpComplex;
use rug::Float;

const PREC: u32 = 256;

fn cofactor_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigRational::zero();
    for col in 0..n {
        let minor: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * cofactor_det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn to_float(q: &BigRational) -> Float {
    let wide = 4 * PREC;
    let num = Float::with_val(wide, Float::parse(q.numer().to_string()).unwrap());
    let den = Float::with_val(wide, Float::parse(q.denom().to_string()).unwrap());
    Float::with_val(PREC, num / den)
}

/// The exact rational value of a finite float.
fn exact_rational(x: &Float) -> BigRational {
    let (mantissa, exp) = x.to_integer_exp().expect("finite");
    let m = BigInt::parse_bytes(mantissa.to_string_radix(16).as_bytes(), 16).expect("hex mantissa");
    let two = BigRational::from_integer(BigInt::from(2));
    let scale = if exp >= 0 {
        num::pow(two, exp as usize)
    } else {
        num::pow(two, (-exp) as usize).recip()
    };
    BigRational::from_integer(m) * scale
}

fn ulp(x: &Float) -> Float {
    let exp = x.get_exp().expect("nonzero normal value");
    Float::with_val(PREC, Float::i_exp(1, exp - PREC as i32))
}

/// Hankel-symmetric `n x n` matrix from `2n - 1` random rationals.
fn random_hankel(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<BigRational>> {
    let h: Vec<BigRational> = (0..2 * n - 1)
        .map(|_| {
            let num: i64 = rng.gen_range(-60..=60);
            let den: i64 = rng.gen_range(1..=24);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| h[i + j].clone()).collect()).collect()
}

#[test]
fn lu_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 100 {
        let n = if checked % 2 == 0 { 3 } else { 4 };
        // the oracle sees exactly the rounded entries the LU sees
        let rounded: Vec<Vec<Float>> = random_hankel(&mut rng, n)
            .iter()
            .map(|row| row.iter().map(to_float).collect())
            .collect();
        let exact_m: Vec<Vec<BigRational>> = rounded
            .iter()
            .map(|row| row.iter().map(exact_rational).collect())
            .collect();
        let exact = cofactor_det(&exact_m);
        if exact.is_zero() {
            continue;
        }
        let m = SquareMatrix::from_fn(n, |i, j| MpComplex::from_real(rounded[i][j].clone()));
        assert!(m.is_symmetric());
        let lu = determinant(&m).value;
        assert!(lu.im().is_zero());
        let target = to_float(&exact);
        let err = Float::with_val(PREC, lu.re() - &target).abs() / ulp(&target);
        let err = err.to_f64();
        worst = worst.max(err);
        assert!(
            err <= 2.0,
            "n={n} det={} lu={} off by {err:.2} ulp",
            target.to_string_radix(10, Some(30)),
            lu.re().to_string_radix(10, Some(30))
        );
        checked += 1;
    }
    println!("worst deviation {worst:.3} ulp over {checked} matrices");
}

#[test]
fn oracle_sanity() {
    let one = BigRational::one();
    let m = vec![
        vec![one.clone(), BigRational::zero()],
        vec![BigRational::zero(), &one + &one],
    ];
    assert_eq!(cofactor_det(&m), BigRational::from_integer(BigInt::from(2)));
    assert!(cofactor_det(&[vec![-one]]).is_negative());
}
