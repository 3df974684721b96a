use num_complex::Complex64;

use qaa_core::sim::{count_resources, CostModel};
use qaa_core::stateprep::{simulate, PrepSpec, PrepVariant};
use qaa_core::QaaError;

#[test]
fn complex_exhaustive() {
    for n in 2..=3usize {
        let spec = PrepSpec::new(PrepVariant::Complex, n).unwrap();
        let c = spec.build().unwrap();
        let denom = (1u64 << (n + 2)) as f64;
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                let got = simulate(&spec, &c, a, b).unwrap();
                let want = Complex64::new(a as f64, b as f64) / denom;
                assert!((got - want).norm() < 1e-10, "n={n} a={a} b={b}: {got}");
            }
        }
    }
}

#[test]
fn data_register_is_left_intact() {
    for variant in PrepVariant::ALL {
        let spec = PrepSpec::new(variant, 3).unwrap();
        let c = spec.build().unwrap();
        let shift = c.num_qubits() - 3;
        for x in 0..8u64 {
            let input = spec.input_index(&c, x, 0).unwrap();
            let s = c.run(input).unwrap();
            let outside: f64 = s
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(i, _)| (i >> shift) != ((input >> shift) & 7) && variant != PrepVariant::Complex)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            assert!(outside < 1e-20, "{variant} x={x}");
        }
    }
}

#[test]
fn improved_uses_n_multi_controlled_rotations() {
    for n in 2..=10 {
        let c = PrepSpec::new(PrepVariant::Improved, n).unwrap().build().unwrap();
        let r = count_resources(&c, &CostModel::default());
        assert_eq!(r.multi_controlled_rotations(), n, "n = {n}");
        assert_eq!(r.extra_qubits, PrepSpec::new(PrepVariant::Improved, n).unwrap().extra_qubits());
    }
}

#[test]
fn closed_form_examples() {
    let cases = [
        (PrepVariant::Basic, 2, 3, 0.375),
        (PrepVariant::Alternative, 3, 5, 0.625),
        (PrepVariant::Improved, 4, 9, 0.28125),
        (PrepVariant::Improved, 3, 7, 0.4375),
    ];
    for (v, n, x, want) in cases {
        let spec = PrepSpec::new(v, n).unwrap();
        let c = spec.build().unwrap();
        let got = simulate(&spec, &c, x, 0).unwrap();
        assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12, "{v} n={n} x={x}: {got}");
    }
}

#[test]
fn rejects_bad_widths_and_values() {
    assert!(matches!(PrepSpec::new(PrepVariant::Basic, 1), Err(QaaError::InvalidParameter(_))));
    assert!("quantum".parse::<PrepVariant>().is_err());
    let spec = PrepSpec::new(PrepVariant::Improved, 3).unwrap();
    let c = spec.build().unwrap();
    assert!(matches!(spec.input_index(&c, 8, 0), Err(QaaError::RegisterOverflow { .. })));
}
