use proptest::prelude::*;
use rpm_core::models::{v1_potential, v2_potential};
use rpm_core::mp::decimal_digits;
use rpm_core::{build_qgrid, riccati_coefficients, DecimalValue, MpComplex, PotentialSpec};
use rug::ops::Pow;
use rug::Float;

const PREC: u32 = 512;

fn lambda(text: &str) -> Float {
    DecimalValue::parse(text).unwrap().at(PREC)
}

/// Central differences of `f_j` against the differentiated recurrence, `j <= 40`.
fn check_derivative(potential: &PotentialSpec, energy: &MpComplex) {
    let grid = build_qgrid(potential).unwrap();
    let p = decimal_digits(PREC) as i32;
    let h = Float::with_val(PREC, 10).pow(-p / 3);
    let tol = Float::with_val(PREC, 10).pow(-p / 2);
    let step = MpComplex::from_real(h.clone());
    let exact = riccati_coefficients(&grid, energy, 40, true, PREC).unwrap();
    let plus = riccati_coefficients(&grid, &(energy + &step), 40, false, PREC).unwrap();
    let minus = riccati_coefficients(&grid, &(energy - &step), 40, false, PREC).unwrap();
    let g = exact.g.as_ref().unwrap();
    for j in 0..=40 {
        let fd = (&plus.f[j] - &minus.f[j]).div_real(&Float::with_val(PREC, &h * 2u32));
        let mut scale = g[j].abs();
        if scale < 1 {
            scale = Float::with_val(PREC, 1);
        }
        let err = Float::with_val(PREC, (&g[j] - &fd).abs() / scale);
        assert!(err <= tol, "j={j}: relative error {}", err.to_f64());
    }
}

#[test]
fn derivative_matches_finite_differences_v1() {
    let e = MpComplex::from_real(Float::with_val(PREC, -0.3));
    check_derivative(&v1_potential(&lambda("0.1")), &e);
}

#[test]
fn derivative_matches_finite_differences_v2() {
    let e = MpComplex::parse("-0.27519233330828482428", "1.39189648509e-8", PREC).unwrap();
    check_derivative(&v2_potential(&lambda("0.1")), &e);
    check_derivative(
        &v2_potential(&lambda("0.1")),
        &MpComplex::from_real(Float::with_val(PREC, -0.3)),
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_energy_gives_conjugate_coefficients(
        l in 1u32..500, re in -2000i32..0, im in 1i32..1000, v2 in any::<bool>(),
    ) {
        let lam = Float::with_val(PREC, l) / 1000u32;
        let potential = if v2 { v2_potential(&lam) } else { v1_potential(&lam) };
        let grid = build_qgrid(&potential).unwrap();
        let e = MpComplex::new(Float::with_val(PREC, re) / 1000u32, Float::with_val(PREC, im) / 1000u32);
        let up = riccati_coefficients(&grid, &e, 30, true, PREC).unwrap();
        let down = riccati_coefficients(&grid, &e.conj(), 30, true, PREC).unwrap();
        for j in 0..=30 {
            prop_assert_eq!(&down.f[j], &up.f[j].conj());
            prop_assert_eq!(&down.g.as_ref().unwrap()[j], &up.g.as_ref().unwrap()[j].conj());
        }
    }

    #[test]
    fn real_energy_keeps_coefficients_real(l in 1u32..500, re in -2000i32..0) {
        let lam = Float::with_val(PREC, l) / 1000u32;
        let grid = build_qgrid(&v1_potential(&lam)).unwrap();
        let e = MpComplex::from_real(Float::with_val(PREC, re) / 1000u32);
        let c = riccati_coefficients(&grid, &e, 30, true, PREC).unwrap();
        prop_assert!(c.f.iter().chain(c.g.as_ref().unwrap()).all(|x| x.im().is_zero()));
    }
}
