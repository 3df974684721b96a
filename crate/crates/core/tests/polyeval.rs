use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use qaa_core::polyeval::{
    build_eval_circuit, fit, named_function, power_gadget, qram_load_fragment, CoefficientTable, FitOptions,
    PiecewisePolynomial, Provenance, QramStub,
};
use qaa_core::QaaError;

fn activation_opts() -> FitOptions {
    FitOptions { degree: 3, pieces: 4, n_bits: 12, eps: 1e-3 }
}

#[test]
fn linear_row_at_half() {
    let poly = PiecewisePolynomial::new(vec![0.0, 1.0], 1, 4, vec![vec![0, 1]]).unwrap();
    let qram = QramStub::from_polynomial("x", &poly);
    let e = build_eval_circuit(&poly, &qram, 0, 0.5).unwrap();
    assert!((e.flag_amplitude().unwrap() - 0.0078125).abs() < 1e-12);
}

#[test]
fn zero_row_gives_zero() {
    let poly = PiecewisePolynomial::new(vec![0.0, 1.0], 2, 5, vec![vec![0, 0, 0]]).unwrap();
    let qram = QramStub::from_polynomial("zero", &poly);
    let e = build_eval_circuit(&poly, &qram, 0, 0.3).unwrap();
    assert!(e.flag_amplitude().unwrap().abs() < 1e-15);
}

#[test]
fn fragment_sign_branch() {
    let prov = Provenance { function: "c".into(), degree: 0, pieces: 2, n_bits: 4 };
    let q = QramStub::from_rows(prov, BTreeMap::from([(0, vec![8]), (1, vec![-8])]));
    for (j, want) in [(0, 0.25), (1, -0.25)] {
        let c = qram_load_fragment(&q, j).unwrap();
        assert!((c.flag_amplitude_for_input(0).unwrap().re - want).abs() < 1e-12);
    }
}

#[test]
fn power_gadget_matches_powers() {
    let mut rng = StdRng::seed_from_u64(3);
    for d in 1..=3usize {
        let control_width = if d == 1 { 1 } else { 2 };
        for _ in 0..10 {
            let u: f64 = rng.random_range(0.0..1.0);
            let c = power_gadget(d, u).unwrap();
            for i in 0..=d {
                let a = c.flag_amplitude_for_input(i << d).unwrap();
                assert!((a.re - u.powi(i as i32)).abs() < 1e-12, "d={d} i={i}");
            }
            assert_eq!(c.num_qubits(), control_width + d);
        }
    }
}

#[test]
fn uncompute_accounts_for_whole_norm() {
    let poly = PiecewisePolynomial::new(vec![-1.0, 0.0, 2.0], 2, 5, vec![vec![31, -7, 12], vec![-20, 3, 0]]).unwrap();
    let qram = QramStub::from_polynomial("quad", &poly);
    for x in [-1.0, -0.4, 0.0, 1.3] {
        let j = poly.subdomain(x).unwrap();
        let e = build_eval_circuit(&poly, &qram, j, x).unwrap();
        let s = e.circuit.run(0).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        assert!((s.amplitude(0).re * e.scale - poly.eval_classical(x).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn activation_fits_report_honestly() {
    for name in ["sigmoid", "tanh", "mrelu"] {
        let f = named_function(name, 0.1).unwrap();
        let (poly, report) = fit(&*f, (0.0, 1.0), &activation_opts()).unwrap();
        assert!(report.within_target, "{name}");
        for j in 0..poly.pieces() {
            let (a, b) = (poly.breakpoints()[j], poly.breakpoints()[j + 1]);
            let mut indep = 0.0f64;
            for k in 0..25_000 {
                let x = a + (b - a) * (k as f64 + 0.5) / 25_000.0;
                indep = indep.max((poly.eval_function_units(x).unwrap() - f(x)).abs());
            }
            let reported = report.max_abs_error[j];
            assert!((indep - reported).abs() <= 0.1 * reported + 1e-15, "{name} piece {j}: {indep} vs {reported}");
        }
    }
}

#[test]
fn sigmoid_spot_values() {
    let f = named_function("sigmoid", 0.0).unwrap();
    let opts = activation_opts();
    let (poly, report) = fit(&*f, (0.0, 1.0), &opts).unwrap();
    let qram = QramStub::from_polynomial("sigmoid", &poly);
    let x = 0.3;
    let e = build_eval_circuit(&poly, &qram, poly.subdomain(x).unwrap(), x).unwrap();
    let value = e.value().unwrap() * poly.output_scale();
    assert!((value - f(x)).abs() <= report.worst() + 2f64.powi(-12));
    assert!((poly.eval_function_units(0.7).unwrap() - f(0.7)).abs() <= report.worst());
}

#[test]
fn tables_round_trip_through_files() {
    let f = named_function("tanh", 0.0).unwrap();
    let (poly, report) = fit(&*f, (-2.0, 2.0), &FitOptions { degree: 3, pieces: 8, n_bits: 10, eps: 1e-3 }).unwrap();
    let table = CoefficientTable::new("tanh", &poly, Some(report));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tanh.json");
    std::fs::write(&path, table.to_json()).unwrap();
    let back = CoefficientTable::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, table);
    assert_eq!(back.polynomial().unwrap(), poly);
    for k in 0..100 {
        let x = -2.0 + 4.0 * k as f64 / 100.0;
        assert_eq!(back.polynomial().unwrap().eval_classical(x).unwrap(), poly.eval_classical(x).unwrap());
    }
}

#[test]
fn large_functions_are_scaled() {
    let f = |x: f64| 5.0 * x * x - 3.0;
    let (poly, report) = fit(&f, (-1.0, 1.0), &FitOptions { degree: 2, pieces: 2, n_bits: 14, eps: 1e-2 }).unwrap();
    // left piece in u: 5u² − 10u + 2
    assert_eq!(poly.output_scale(), 16.0);
    assert!(report.within_target, "{:?}", report.max_abs_error);
    let qram = QramStub::from_polynomial("quad", &poly);
    let e = build_eval_circuit(&poly, &qram, 1, 0.5).unwrap();
    let value = e.value().unwrap() * poly.output_scale();
    assert!((value - f(0.5)).abs() <= report.worst() + 1e-9);
}

#[test]
fn rejects_bad_requests() {
    let poly = PiecewisePolynomial::new(vec![0.0, 1.0], 1, 4, vec![vec![0, 1]]).unwrap();
    let qram = QramStub::from_polynomial("x", &poly);
    assert!(matches!(build_eval_circuit(&poly, &qram, 0, 1.0), Err(QaaError::OutsideSubdomain { .. })));
    assert!(matches!(poly.eval_classical(-0.5), Err(QaaError::OutsideSubdomain { .. })));

    let other = PiecewisePolynomial::new(vec![0.0, 1.0], 1, 5, vec![vec![0, 1]]).unwrap();
    assert!(build_eval_circuit(&other, &qram, 0, 0.5).is_err());

    let mut t = CoefficientTable::new("x", &poly, None);
    t.domain = [0.0, 2.0];
    assert!(matches!(t.polynomial(), Err(QaaError::Table(_))));
    assert!(CoefficientTable::from_json("{\"function\": 3}").is_err());

    let f = |x: f64| x.ln();
    let o = FitOptions { degree: 2, pieces: 1, n_bits: 8, eps: 1e-3 };
    assert!(matches!(fit(&f, (0.0, 1.0), &o), Err(QaaError::Unbounded(_))));
    assert!(fit(&f, (1.0, 2.0), &FitOptions { pieces: 65, ..o }).is_err());
}
