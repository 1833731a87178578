use dca_core::grid::Grid;
use dca_core::kernel::{DiscreteKernel, DiscretizationRule, KernelFamily, KernelSpec};
use dca_core::rhs::{eval_rhs_into, mass_defect_rate, weak_form_rate, RhsPath, RhsWorkspace};
use dca_core::DiscreteState;
use dca_oracle::{naive_rhs, naive_weak_form, OracleResult};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 0x5eed_0001;

fn spec_for(which: usize) -> KernelSpec {
    match which {
        0 => KernelSpec::pair(KernelFamily::Constant(1.0), KernelFamily::Constant(1.0)),
        1 => KernelSpec::pair(KernelFamily::Product, KernelFamily::Product),
        2 => KernelSpec::pair(KernelFamily::Sum, KernelFamily::Sum),
        _ => KernelSpec::scaled(KernelFamily::Sum, 0.5).unwrap(),
    }
}

fn random_state(rng: &mut StdRng, m: usize) -> Vec<f64> {
    (0..m).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.0..2.0) }).collect()
}

#[test]
fn rhs_matches_naive_transcription() {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for n in 0..400 {
        let m = rng.gen_range(2..=32);
        let eps = rng.gen_range(0.01..0.3);
        let which = n % 4;
        let spec = spec_for(which);
        let g = Grid::with_cells(eps, m).unwrap();
        let dk = DiscreteKernel::new(&spec, g, DiscretizationRule::Point).unwrap();
        let c = random_state(&mut rng, m);
        let reference = naive_rhs(&c, eps, |x, y| spec.eval_k(x, y).unwrap(), |x, y| spec.eval_c(x, y).unwrap()).unwrap();
        for path in [RhsPath::Auto, RhsPath::Generic] {
            let mut ws = RhsWorkspace::new(m);
            eval_rhs_into(&c, &dk, path, &mut ws).unwrap();
            let r = OracleResult::compare(reference.clone(), ws.q.clone()).unwrap();
            worst = worst.max(r.rel_discrepancy);
            assert!(r.rel_discrepancy <= 1e-13, "instance {n} ({path:?}): {}", r.rel_discrepancy);
        }
    }
    assert!(worst <= 1e-13);
}

#[test]
fn lambda_one_equals_independent_pair() {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let g = Grid::with_cells(0.1, 12).unwrap();
    let scaled = DiscreteKernel::new(&KernelSpec::scaled(KernelFamily::Sum, 1.0).unwrap(), g, DiscretizationRule::Point).unwrap();
    let pair = DiscreteKernel::new(&spec_for(2), g, DiscretizationRule::Point).unwrap();
    for _ in 0..20 {
        let c = random_state(&mut rng, 12);
        let (mut a, mut b) = (RhsWorkspace::new(12), RhsWorkspace::new(12));
        eval_rhs_into(&c, &scaled, RhsPath::Generic, &mut a).unwrap();
        eval_rhs_into(&c, &pair, RhsPath::Generic, &mut b).unwrap();
        assert_eq!(a.q, b.q);
    }
}

#[test]
fn weak_form_matches_brute_force_sum() {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    for n in 0..200 {
        let m = rng.gen_range(2..=8);
        let spec = spec_for(n % 4);
        let g = Grid::with_cells(0.1, m).unwrap();
        let dk = DiscreteKernel::new(&spec, g, DiscretizationRule::Point).unwrap();
        let s = DiscreteState::from_values(g, random_state(&mut rng, m), 0.0).unwrap();
        let phi: Vec<f64> = (0..=m).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let fast = weak_form_rate(&s, &dk, &phi).unwrap();
        let slow = naive_weak_form(&s.c, 0.1, &phi, |x, y| spec.eval_k(x, y).unwrap(), |x, y| spec.eval_c(x, y).unwrap())
            .unwrap();
        assert!((fast - slow).abs() <= 1e-12 * (1.0 + slow.abs()), "{fast} vs {slow}");
    }
}

#[test]
fn number_rate_is_the_weak_form_with_unit_phi() {
    let mut rng = StdRng::seed_from_u64(SEED + 3);
    for n in 0..100 {
        let m = rng.gen_range(2..=20);
        let spec = spec_for(n % 4);
        let g = Grid::with_cells(0.05, m).unwrap();
        let dk = DiscreteKernel::new(&spec, g, DiscretizationRule::Point).unwrap();
        let s = DiscreteState::from_values(g, random_state(&mut rng, m), 0.0).unwrap();
        let rate = weak_form_rate(&s, &dk, &vec![1.0; m + 1]).unwrap();
        assert!(rate <= 0.0);
        // Σ Q_i = rate: φ ≡ 1 has no boundary flux contribution
        let mut ws = RhsWorkspace::new(m);
        eval_rhs_into(&s.c, &dk, RhsPath::Generic, &mut ws).unwrap();
        let q_sum: f64 = ws.q.iter().sum();
        let flux_m = s.c[m - 1] * (ws.f1[m - 1] + ws.f2[m - 1]);
        assert!((q_sum + flux_m - rate).abs() <= 1e-12 * (1.0 + rate.abs() + flux_m));
        let d = mass_defect_rate(&s, &dk).unwrap();
        assert!(d <= 0.0);
    }
}
