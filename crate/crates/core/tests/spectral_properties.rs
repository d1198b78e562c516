//! Randomized consistency sweeps over the closed-form spectrum: both
//! energy routes agree, every root satisfies the defining quadratic,
//! the coupling reductions reproduce their textbook limits, and the
//! a^2 diagnostic tracks the telescoped remainder sum.

use dirac_susy::ladder::remainder_sum;
use dirac_susy::spectral::{
    effective_lambda, energy_quadratic, energy_quadratic_scale, ground_state_energy, k_hat,
    level_energy_closed, level_energy_implicit, Branch, Couplings,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const KAPPAS: [i32; 6] = [1, -1, 2, -2, 3, -3];

fn sweep_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn implicit_agrees_with_closed_over_sweep() {
    let mut rng = sweep_rng(0x5eed_0001);
    let mut checked = 0;
    while checked < 800 {
        let a1 = rng.gen_range(0.0..0.9);
        let a2 = rng.gen_range(0.0..0.9);
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let n_r = rng.gen_range(0..=5u32);
        let couplings = Couplings::new(a1, a2, 1.0).unwrap();
        let lambda = match effective_lambda(kappa, &couplings) {
            Ok(l) => l,
            Err(_) => continue, // supercritical corner of the box
        };
        for branch in [Branch::Plus, Branch::Minus] {
            let level = level_energy_implicit(&couplings, lambda, n_r, branch).unwrap();
            let closed =
                level_energy_closed(&couplings, lambda + f64::from(n_r), branch).unwrap();
            let rel = ((level.energy - closed) / closed).abs();
            assert!(
                rel < 1e-10,
                "a1={a1} a2={a2} kappa={kappa} n_r={n_r} {branch}: rel {rel:e}"
            );
            assert!(level.energy.abs() <= 1.0);
            assert_eq!(level.nhat, lambda + f64::from(n_r));
        }
        checked += 1;
    }
}

#[test]
fn quadratic_residual_over_sweep() {
    let mut rng = sweep_rng(0x5eed_0002);
    for _ in 0..500 {
        let a1 = rng.gen_range(0.0..0.9);
        let a2 = rng.gen_range(0.0..0.9);
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let n_r = rng.gen_range(0..=5u32);
        let couplings = Couplings::new(a1, a2, 1.0).unwrap();
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };
        let nhat = lambda + f64::from(n_r);
        for branch in [Branch::Plus, Branch::Minus] {
            let e = level_energy_closed(&couplings, nhat, branch).unwrap();
            let rel = energy_quadratic(&couplings, nhat, e).abs()
                / energy_quadratic_scale(&couplings, nhat, e);
            assert!(rel < 1e-11, "a1={a1} a2={a2} nhat={nhat} {branch}: rel {rel:e}");
        }
    }
}

#[test]
fn ground_state_identity_both_branches() {
    let mut rng = sweep_rng(0x5eed_0003);
    for _ in 0..300 {
        let a1 = rng.gen_range(0.0..0.9);
        let a2 = rng.gen_range(0.0..0.9);
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let couplings = Couplings::new(a1, a2, 1.0).unwrap();
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };
        for branch in [Branch::Plus, Branch::Minus] {
            let g = ground_state_energy(&couplings, lambda, branch).unwrap();
            let c = level_energy_closed(&couplings, lambda, branch).unwrap();
            let scale = g.abs().max(1e-3);
            assert!(((g - c) / scale).abs() < 1e-12, "a1={a1} a2={a2} kappa={kappa} {branch}");
        }
    }
}

#[test]
fn reduction_pure_vector_sommerfeld() {
    let mut rng = sweep_rng(0x5eed_0004);
    for _ in 0..200 {
        let a1 = rng.gen_range(0.01..0.9);
        let couplings = Couplings::new(a1, 0.0, 1.0).unwrap();
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };
        let n_r = rng.gen_range(0..=5u32);
        let nhat = lambda + f64::from(n_r);
        let e = level_energy_closed(&couplings, nhat, Branch::Plus).unwrap();
        let want = nhat / (nhat * nhat + a1 * a1).sqrt();
        assert!(((e - want) / want).abs() < 1e-12, "a1={a1} nhat={nhat}");
    }
}

#[test]
fn reduction_pure_scalar() {
    let mut rng = sweep_rng(0x5eed_0005);
    for _ in 0..200 {
        let a2 = rng.gen_range(0.01..0.9);
        let couplings = Couplings::new(0.0, a2, 1.0).unwrap();
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let lambda = effective_lambda(kappa, &couplings).unwrap();
        let n_r = rng.gen_range(0..=5u32);
        let nhat = lambda + f64::from(n_r);
        for branch in [Branch::Plus, Branch::Minus] {
            let e = level_energy_closed(&couplings, nhat, branch).unwrap();
            let want = branch.sign() * (1.0 - a2 * a2 / (nhat * nhat)).sqrt();
            assert!(((e - want) / want).abs() < 1e-12, "a2={a2} nhat={nhat} {branch}");
        }
    }
}

#[test]
fn reduction_equal_couplings() {
    let mut rng = sweep_rng(0x5eed_0006);
    for _ in 0..200 {
        let a = rng.gen_range(0.01..0.9);
        let couplings = Couplings::new(a, a, 1.0).unwrap();
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let lambda = effective_lambda(kappa, &couplings).unwrap();
        let n_r = rng.gen_range(0..=5u32);
        let nhat = lambda + f64::from(n_r);
        let e = level_energy_closed(&couplings, nhat, Branch::Plus).unwrap();
        let want = (nhat * nhat - a * a) / (nhat * nhat + a * a);
        assert!(((e - want) / want).abs() < 1e-12, "a={a} nhat={nhat}");
    }
}

#[test]
fn plus_branch_energies_increase_with_n() {
    let mut rng = sweep_rng(0x5eed_0007);
    for _ in 0..120 {
        let a1 = rng.gen_range(0.05..0.9);
        let a2 = rng.gen_range(0.05..0.9);
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let couplings = Couplings::new(a1, a2, 1.0).unwrap();
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };
        let mut previous = f64::NEG_INFINITY;
        for n_r in 0..=5u32 {
            let level = level_energy_implicit(&couplings, lambda, n_r, Branch::Plus).unwrap();
            assert!(
                level.energy > previous,
                "a1={a1} a2={a2} kappa={kappa}: E_{n_r} = {} not above {previous}",
                level.energy
            );
            previous = level.energy;
        }
    }
}

#[test]
fn a_squared_matches_remainder_sum() {
    let mut rng = sweep_rng(0x5eed_0008);
    for _ in 0..200 {
        let a1 = rng.gen_range(0.05..0.9);
        let a2 = rng.gen_range(0.05..0.9);
        let kappa = KAPPAS[rng.gen_range(0..KAPPAS.len())];
        let couplings = Couplings::new(a1, a2, 1.0).unwrap();
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };

        // ground state: a^2 = 0 on the plus branch
        let ground = level_energy_implicit(&couplings, lambda, 0, Branch::Plus).unwrap();
        assert!(ground.a_sq.abs() < 1e-10, "a1={a1} a2={a2} kappa={kappa}: {}", ground.a_sq);

        // excited: a^2 M^2 / lambda^2 equals the telescoped remainder sum at q_n
        let n_r = rng.gen_range(1..=5u32);
        let level = level_energy_implicit(&couplings, lambda, n_r, Branch::Plus).unwrap();
        let q = couplings.coulomb_strength(level.energy);
        let sum = remainder_sum(lambda, q, n_r).unwrap();
        let lhs = level.a_sq / (lambda * lambda);
        assert!(
            ((lhs - sum) / sum).abs() < 1e-10,
            "a1={a1} a2={a2} kappa={kappa} n_r={n_r}: {lhs} vs {sum}"
        );
    }
}

#[test]
fn observables_invariant_under_cd_rescaling() {
    let couplings = Couplings::new(0.5, 0.5, 1.0).unwrap();
    let lambda = effective_lambda(-1, &couplings).unwrap();
    let level = level_energy_implicit(&couplings, lambda, 1, Branch::Plus).unwrap();
    let reference = k_hat(level.energy, &couplings, lambda, -1, 1.0, 1.0).unwrap();
    for &(c, d) in &[(2.0, 0.5), (10.0, 3.0), (-1.0, -1.0)] {
        let kh = k_hat(level.energy, &couplings, lambda, -1, c, d).unwrap();
        let lhs = -kh.kminus * kh.kplus;
        let want = -reference.kminus * reference.kplus;
        assert!(((lhs - want) / want).abs() < 1e-13, "c={c} d={d}");
        assert_eq!(kh.k3, reference.k3);
        assert_eq!(kh.ksq, reference.ksq);
    }
}

#[test]
fn nonbinding_channel_rejected_throughout() {
    let couplings = Couplings::new(1.2, 0.0, 1.0).unwrap();
    assert!(effective_lambda(-1, &couplings).is_err());
    assert!(effective_lambda(1, &couplings).is_err());
    // wider kappa still binds
    assert!(effective_lambda(2, &couplings).is_ok());
}
