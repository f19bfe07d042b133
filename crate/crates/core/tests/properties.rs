use conclusive_core::analysis::{
    enumerate_protocol, enumerate_traces, monte_carlo, no_signaling_deviation,
};
use conclusive_core::gates::{cnot, pauli_correction, sigma_x, sigma_z};
use conclusive_core::measurement::{
    discrimination_povm, enumerate_povm, enumerate_projective, ProjectiveMeasurement,
};
use conclusive_core::{ChannelSpec, InputQubit, Operator, ProtocolId, StateVector, TOL};
use num_complex::Complex64;
use proptest::prelude::*;

fn amps(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_map(|v| {
            v.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect()
        })
        .prop_filter("non-zero norm", |v: &Vec<Complex64>| {
            v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
        })
}

fn state(labels: &'static [&'static str]) -> impl Strategy<Value = StateVector> {
    amps(labels.len()).prop_map(move |v| StateVector::new(v, labels).unwrap())
}

fn input() -> impl Strategy<Value = InputQubit> {
    (
        0.0f64..1.0,
        0.0f64..std::f64::consts::TAU,
        0.0f64..std::f64::consts::TAU,
    )
        .prop_map(|(u, p, q)| {
            InputQubit::new(
                Complex64::from_polar(u.sqrt(), p),
                Complex64::from_polar((1.0 - u).sqrt(), q),
            )
            .unwrap()
        })
}

fn beta() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(std::f64::consts::FRAC_1_SQRT_2),
        0.0f64..0.707
    ]
}

fn unitary() -> impl Strategy<Value = (Operator, Vec<&'static str>)> {
    prop_oneof![
        Just((sigma_x(), vec!["q1"])),
        Just((sigma_z(), vec!["q2"])),
        Just((pauli_correction(true, true), vec!["q0"])),
        Just((cnot(), vec!["q2", "q0"])),
        Just((cnot(), vec!["q0", "q1"])),
    ]
}

const THREE: &[&str] = &["q0", "q1", "q2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_preserve_norm(s in state(THREE), (u, t) in unitary()) {
        let out = s.apply_operator(&u, &t).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < TOL);
        // unitaries need no renormalization: overlap with a re-applied inverse is 1
        let back = out.apply_operator(&u.adjoint(), &t).unwrap();
        prop_assert!((back.fidelity(&s).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn tensor_is_associative(a in state(&["a"]), b in state(&["b"]), c in state(&["c"])) {
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        prop_assert_eq!(left.labels(), right.labels());
        for (x, y) in left.amps().iter().zip(right.amps()) {
            prop_assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in state(THREE), b in state(THREE)) {
        let f = a.fidelity(&b).unwrap();
        prop_assert!((f - b.fidelity(&a).unwrap()).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((a.fidelity(&a).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn product_states_reduce_to_factors(a in state(&["a"]), b in state(&["b", "c"])) {
        let ab = a.tensor(&b).unwrap();
        let ra = ab.reduced_density(&["a"]).unwrap();
        prop_assert!(ra.max_abs_diff(&a.density()).unwrap() < TOL);
        let rb = ab.reduced_density(&["b", "c"]).unwrap();
        prop_assert!(rb.max_abs_diff(&b.density()).unwrap() < TOL);
        prop_assert!((ra.trace() - 1.0).abs() < TOL && ra.is_valid());
    }

    #[test]
    fn measurement_probabilities_sum_to_one(s in state(THREE), beta in beta()) {
        let bell = enumerate_projective(&s, &ProjectiveMeasurement::bell(), &["q0", "q2"]).unwrap();
        let total: f64 = bell.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < TOL);
        let povm = discrimination_povm(&ChannelSpec::from_beta(beta).unwrap()).unwrap();
        let out = enumerate_povm(&s, &povm, &["q1"]).unwrap();
        let total: f64 = out.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < TOL);
        for b in out.iter().filter(|b| !b.is_null()) {
            prop_assert!((b.post_state.as_ref().unwrap().norm_sqr() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn povm_is_complete_for_any_beta(beta in beta()) {
        let p = discrimination_povm(&ChannelSpec::from_beta(beta).unwrap()).unwrap();
        prop_assert!(p.completeness_error() < TOL);
        prop_assert!(p.kraus_error() < TOL);
        prop_assert!(p.elements().iter().all(|a| a.is_psd(TOL)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conclusive_protocols_succeed_with_two_beta_squared(q in input(), beta in beta()) {
        let c = ChannelSpec::from_beta(beta).unwrap();
        for id in ProtocolId::CONCLUSIVE {
            let d = enumerate_protocol(id, &q, &c).unwrap();
            prop_assert!((d.total_probability() - 1.0).abs() < TOL);
            prop_assert!((d.success_probability() - 2.0 * c.beta().powi(2)).abs() < TOL);
            prop_assert!(d.worst_success_infidelity() < TOL);
        }
    }

    #[test]
    fn remote_marginals_ignore_alice(q in input(), beta in beta()) {
        let c = ChannelSpec::from_beta(beta).unwrap();
        for id in ProtocolId::ALL {
            let t = enumerate_traces(id, &q, &c).unwrap();
            prop_assert!(no_signaling_deviation(&t, id.remote_qubits()).unwrap() < TOL);
        }
    }

    #[test]
    fn sampling_is_a_function_of_the_seed(seed in any::<u64>(), beta in beta()) {
        let c = ChannelSpec::from_beta(beta).unwrap();
        let q = InputQubit::reference();
        let a = monte_carlo(ProtocolId::Css3, &q, &c, 64, seed).unwrap();
        let b = monte_carlo(ProtocolId::Css3, &q, &c, 64, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.successes <= a.shots);
        prop_assert_eq!(a.frequencies.values().sum::<u64>(), a.shots);
        // every sampled path is a leaf of the exact distribution
        let d = enumerate_protocol(ProtocolId::Css3, &q, &c).unwrap();
        for key in a.frequencies.keys() {
            prop_assert!(d.probability_of(key).is_some_and(|p| p > 0.0));
        }
    }
}
