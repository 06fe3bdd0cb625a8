use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::kernels::{Dimension, KernelFamily, KernelSpec};
use crate::vector::Vec2;

const WENDLAND_1D: KernelSpec = KernelSpec::new(KernelFamily::WendlandC2, Dimension::One);
const WENDLAND_2D: KernelSpec = KernelSpec::new(KernelFamily::WendlandC2, Dimension::Two);

fn state_1d(xs: &[f64], vs: &[f64], ms: &[f64], h: f64) -> ParticleState {
    ParticleState::new(
        Dimension::One,
        xs.iter().map(|&x| Vec2::new(x, 0.0)).collect(),
        vs.iter().map(|&v| Vec2::new(v, 0.0)).collect(),
        ms.to_vec(),
        vec![h; xs.len()],
    )
    .unwrap()
}

fn random_state_2d(rng: &mut ChaCha8Rng, n: usize, h: f64) -> ParticleState {
    ParticleState::new(
        Dimension::Two,
        (0..n)
            .map(|_| Vec2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
            .collect(),
        (0..n)
            .map(|_| Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
        (0..n).map(|_| rng.gen_range(0.5..2.0)).collect(),
        (0..n).map(|_| h * rng.gen_range(0.9..1.1)).collect(),
    )
    .unwrap()
}

fn with_density(ctx: &SphContext, mut state: ParticleState) -> ParticleState {
    state.densities = ctx.estimate_density(&state);
    state
}

fn rel_close(a: Vec2, b: Vec2, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-300)
}

#[test]
fn single_particle_density_is_self_term() {
    let ctx = SphContext::new(WENDLAND_1D);
    let state = state_1d(&[0.3], &[0.0], &[1.0], 1.0);
    assert_eq!(ctx.estimate_density(&state), vec![WENDLAND_1D.w0(1.0)]);
}

#[test]
fn separated_particles_see_only_themselves() {
    let ctx = SphContext::new(WENDLAND_1D);
    let state = state_1d(&[0.0, 10.0], &[0.0, 0.0], &[2.0, 3.0], 1.0);
    let rho = ctx.estimate_density(&state);
    assert_eq!(rho, vec![2.0 * WENDLAND_1D.w0(1.0), 3.0 * WENDLAND_1D.w0(1.0)]);
}

#[test]
fn density_matches_direct_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let state = random_state_2d(&mut rng, 5, 0.4);
    for search in [NeighborSearch::BruteForce, NeighborSearch::CellGrid] {
        let ctx = SphContext::new(WENDLAND_2D).with_search(search);
        let rho = ctx.estimate_density(&state);
        for i in 0..5 {
            let mut expected = 0.0;
            for j in 0..5 {
                let z = state.positions[i] - state.positions[j];
                expected += state.masses[j] * WENDLAND_2D.value(z, state.smoothing_lengths[i]).unwrap();
            }
            assert_eq!(rho[i], expected);
        }
    }
}

#[test]
fn density_lower_bound_is_self_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let state = random_state_2d(&mut rng, 30, 0.2);
    let ctx = SphContext::new(WENDLAND_2D);
    let rho = ctx.estimate_density(&state);
    for i in 0..30 {
        assert!(rho[i] >= state.masses[i] * WENDLAND_2D.w0(state.smoothing_lengths[i]));
    }
}

#[test]
fn single_particle_has_no_acceleration() {
    let ctx = SphContext::new(WENDLAND_2D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let mut state = ParticleState::new(
        Dimension::Two,
        vec![Vec2::new(0.2, 0.1)],
        vec![Vec2::new(1.0, 0.0)],
        vec![1.0],
        vec![0.5],
    )
    .unwrap();
    state.densities = ctx.estimate_density(&state);
    for theta in [Theta::Zero, Theta::One] {
        assert_eq!(ctx.theta_acceleration(&state, &eos, theta).unwrap(), vec![Vec2::ZERO]);
    }
}

#[test]
fn equal_mass_pair_accelerations_cancel_exactly() {
    let ctx = SphContext::new(WENDLAND_2D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 1.4 };
    let state = ParticleState::new(
        Dimension::Two,
        vec![Vec2::new(0.0, 0.0), Vec2::new(0.31, 0.17)],
        vec![Vec2::ZERO; 2],
        vec![0.7, 0.7],
        vec![0.5, 0.5],
    )
    .unwrap();
    let mut state = with_density(&ctx, state);
    state.densities[1] *= 1.3;
    let a = ctx.theta_acceleration(&state, &eos, Theta::One).unwrap();
    assert_eq!(a[0], -a[1]);
    assert!(a[0].norm() > 0.0);
}

#[test]
fn zero_density_is_reported_with_index() {
    let ctx = SphContext::new(WENDLAND_1D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let mut state = state_1d(&[0.0, 0.5, 1.0], &[0.0; 3], &[1.0; 3], 1.0);
    state.densities = vec![1.0, 0.0, 1.0];
    match ctx.theta_acceleration(&state, &eos, Theta::One) {
        Err(crate::Error::Numeric { index, .. }) => assert_eq!(index, 1),
        other => panic!("expected numeric error, got {other:?}"),
    }
}

/// Term-by-term transcription of the theta system:
/// `-F(rho_i) sum_j grad W_ij m_j - theta sum_j F(rho_j) grad W_ij m_j`.
fn theta_oracle(state: &ParticleState, kernel: KernelSpec, eos: &EosSpec, theta: u8) -> Vec<Vec2> {
    let f = |rho: f64| -> f64 {
        if theta == 1 {
            eos.pressure(rho).unwrap() / (rho * rho)
        } else {
            eos.dpressure_ddensity(rho).unwrap() / rho
        }
    };
    let n = state.len();
    let mut out = vec![Vec2::ZERO; n];
    for i in 0..n {
        let mut first = Vec2::ZERO;
        let mut second = Vec2::ZERO;
        for j in 0..n {
            let g = kernel
                .gradient(state.positions[i] - state.positions[j], state.smoothing_lengths[i])
                .unwrap();
            first += g * state.masses[j];
            second += g * (f(state.densities[j]) * state.masses[j]);
        }
        out[i] = first * (-f(state.densities[i])) - second * theta as f64;
    }
    out
}

#[test]
fn four_particles_match_theta_oracle() {
    let ctx = SphContext::new(WENDLAND_1D);
    let state = state_1d(&[0.0, 0.13, 0.31, 0.42], &[0.0; 4], &[1.0, 0.8, 1.2, 0.9], 0.2);
    let state = with_density(&ctx, state);
    for eos in [
        EosSpec::Polytropic { k: 0.7, gamma: 1.4 },
        EosSpec::Tait { b: 10.0, rho0: 5.0, gamma: 7.0 },
    ] {
        for (theta, t) in [(Theta::Zero, 0u8), (Theta::One, 1u8)] {
            let got = ctx.theta_acceleration(&state, &eos, theta).unwrap();
            let want = theta_oracle(&state, WENDLAND_1D, &eos, t);
            for i in 0..4 {
                assert!(rel_close(got[i], want[i], 1e-12), "theta={t} i={i}: {:?} vs {:?}", got[i], want[i]);
            }
        }
    }
}

#[test]
fn theta_zero_breaks_momentum_conservation() {
    let ctx = SphContext::new(WENDLAND_1D);
    // gamma = 2 would make (dP/drho) / rho constant and hide the effect.
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 3.0 };
    let mut state = state_1d(&[0.0, 0.3], &[0.0; 2], &[1.0, 1.0], 0.5);
    state.densities = vec![1.0, 2.0];
    let a = ctx.theta_acceleration(&state, &eos, Theta::Zero).unwrap();
    let total = a[0].scale(state.masses[0]) + a[1].scale(state.masses[1]);
    assert!(total.norm() > 1e-3 * a[0].norm(), "total force {total:?}");

    let a1 = ctx.theta_acceleration(&state, &eos, Theta::One).unwrap();
    let total1 = a1[0].scale(state.masses[0]) + a1[1].scale(state.masses[1]);
    assert_eq!(total1.norm(), 0.0);
}

#[test]
fn viscosity_vanishes_for_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut state = random_state_2d(&mut rng, 20, 0.3);
    state.velocities = vec![Vec2::new(0.4, -1.1); 20];
    let ctx = SphContext::new(WENDLAND_2D);
    let state = with_density(&ctx, state);
    let eos = EosSpec::Tait { b: 100.0, rho0: 1.0, gamma: 7.0 };
    let params = ViscosityParams { alpha: 0.5, beta: 1.0, sound_speed: SoundSpeed::FromEos };
    let a = ctx.artificial_viscosity_acceleration(&state, &eos, &params).unwrap();
    assert!(a.iter().all(|&ai| ai == Vec2::ZERO));
}

#[test]
fn viscosity_inactive_for_separating_pair() {
    let ctx = SphContext::new(WENDLAND_1D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let state = with_density(&ctx, state_1d(&[0.0, 0.1], &[-1.0, 1.0], &[1.0, 1.0], 0.2));
    let params = ViscosityParams { alpha: 0.5, beta: 0.0, sound_speed: SoundSpeed::FromEos };
    let a = ctx.artificial_viscosity_acceleration(&state, &eos, &params).unwrap();
    assert_eq!(a, vec![Vec2::ZERO; 2]);
}

#[test]
fn approaching_pair_matches_hand_expansion() {
    let (x0, x1, v0, v1, m, h) = (0.0, 0.1, 1.0, -1.0, 0.5, 0.2);
    let ctx = SphContext::new(WENDLAND_1D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let state = with_density(&ctx, state_1d(&[x0, x1], &[v0, v1], &[m, m], h));
    let params = ViscosityParams { alpha: 0.5, beta: 0.0, sound_speed: SoundSpeed::FromEos };
    let a = ctx.artificial_viscosity_acceleration(&state, &eos, &params).unwrap();

    // Both densities are equal by symmetry: rho = m (W(0) + W(0.1)).
    let q: f64 = 0.5;
    let w = |q: f64| 5.0 / (8.0 * h) * (1.0 - q / 2.0).powi(3) * (1.5 * q + 1.0);
    let rho = m * (w(0.0) + w(q));
    let c = (2.0 * rho).sqrt();
    let (xij, vij) = (x0 - x1, v0 - v1);
    let mu = h * vij * xij / (xij * xij + 0.01 * h * h);
    let pi = -0.5 * c * mu / rho;
    // dW/dx at x = -0.1: dw/dq = -3 q (1 - q/2)^2, times sign(x) / h^2.
    let dwdx = 5.0 / (8.0 * h * h) * (3.0 * q * (1.0 - q / 2.0).powi(2));
    let expected = -m * pi * dwdx;
    assert!((a[0].x - expected).abs() <= 1e-12 * expected.abs(), "{} vs {expected}", a[0].x);
    assert_eq!(a[1].x, -a[0].x);
    // Approaching particles are pushed apart.
    assert!(a[0].x < 0.0);
}

#[test]
fn mass_flux_vanishes_on_uniform_density() {
    let ctx = SphContext::new(WENDLAND_1D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let mut state = state_1d(&[0.0, 0.1, 0.2, 0.3], &[0.3, -0.2, 0.1, 0.0], &[1.0; 4], 0.15);
    state.densities = vec![2.0; 4];
    let d = ctx.mass_flux_correction(&state, &eos, &MassFluxParams { alpha: 0.5, beta: 1.0 }).unwrap();
    assert!(d.iter().all(|&x| x == 0.0));
}

#[test]
fn mass_flux_reduces_density_jump() {
    let ctx = SphContext::new(WENDLAND_1D);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let mut state = state_1d(&[0.0, 0.1], &[0.0, 0.0], &[1.0, 1.0], 0.2);
    state.densities = vec![3.0, 1.0];
    let d = ctx.mass_flux_correction(&state, &eos, &MassFluxParams::default()).unwrap();
    assert!(d[0] < 0.0 && d[1] > 0.0);
}

#[test]
fn mass_flux_three_particle_expansion() {
    let ctx = SphContext::new(WENDLAND_1D);
    let eos = EosSpec::Polytropic { k: 2.0, gamma: 1.4 };
    let xs = [0.0, 0.07, 0.19];
    let vs = [0.2, -0.1, 0.4];
    let ms = [1.0, 0.5, 0.8];
    let h = 0.12;
    let mut state = state_1d(&xs, &vs, &ms, h);
    state.densities = vec![1.5, 2.5, 1.0];
    let params = MassFluxParams { alpha: 0.5, beta: 0.7 };
    let d = ctx.mass_flux_correction(&state, &eos, &params).unwrap();

    let dwdr = |r: f64| {
        let q = r / h;
        if q >= 2.0 { 0.0 } else { 5.0 / (8.0 * h * h) * 3.0 * q * (1.0 - q / 2.0).powi(2) }
    };
    let c = |rho: f64| (2.0 * 1.4 * rho.powf(0.4)).sqrt();
    for i in 0..3 {
        let mut expected = 0.0;
        for j in 0..3 {
            if i == j {
                continue;
            }
            let r = (xs[i] - xs[j]).abs();
            let vsig = 0.5 * 0.5 * (c(state.densities[i]) + c(state.densities[j]))
                + 0.7 * (vs[i] - vs[j]).abs();
            expected -= ms[j] / state.densities[j] * vsig
                * (state.densities[i] - state.densities[j])
                * dwdr(r);
        }
        assert!((d[i] - expected).abs() <= 1e-12 * expected.abs().max(1e-12), "i={i}: {} vs {expected}", d[i]);
    }
}

#[test]
fn mass_flux_conserves_volume_weighted_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let ctx = SphContext::new(WENDLAND_2D);
    let eos = EosSpec::Tait { b: 50.0, rho0: 1.0, gamma: 7.0 };
    let mut state = random_state_2d(&mut rng, 40, 0.25);
    for h in &mut state.smoothing_lengths {
        *h = 0.25;
    }
    state.densities = (0..40).map(|_| rng.gen_range(0.8..1.2)).collect();
    let d = ctx.mass_flux_correction(&state, &eos, &MassFluxParams { alpha: 0.5, beta: 0.3 }).unwrap();
    let total: f64 = (0..40).map(|i| state.masses[i] / state.densities[i] * d[i]).sum();
    let scale: f64 = (0..40).map(|i| (state.masses[i] / state.densities[i] * d[i]).abs()).sum();
    assert!(total.abs() <= 1e-13 * scale, "{total} vs scale {scale}");
}

#[test]
fn continuity_rate_zero_for_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut state = random_state_2d(&mut rng, 15, 0.3);
    state.velocities = vec![Vec2::new(2.0, 3.0); 15];
    let ctx = SphContext::new(WENDLAND_2D);
    assert!(ctx.continuity_density_rate(&state).unwrap().iter().all(|&r| r == 0.0));
}

#[test]
fn continuity_rate_positive_under_compression() {
    let ctx = SphContext::new(WENDLAND_1D);
    let state = state_1d(&[0.0, 0.1], &[1.0, -1.0], &[1.0, 1.0], 0.2);
    let rate = ctx.continuity_density_rate(&state).unwrap();
    assert!(rate[0] > 0.0 && rate[1] > 0.0);
    assert_eq!(rate[0], rate[1]);
}

#[test]
fn continuity_rate_four_particle_expansion() {
    let xs = [0.0, 0.05, 0.16, 0.22];
    let vs = [1.0, 0.3, -0.4, 0.2];
    let ms = [1.0, 2.0, 0.5, 1.5];
    let h = 0.1;
    let ctx = SphContext::new(WENDLAND_1D);
    let rate = ctx.continuity_density_rate(&state_1d(&xs, &vs, &ms, h)).unwrap();
    let dwdx = |x: f64| {
        let q = x.abs() / h;
        if q >= 2.0 { 0.0 } else { -5.0 / (8.0 * h * h) * 3.0 * q * (1.0 - q / 2.0).powi(2) * x.signum() }
    };
    for i in 0..4 {
        let expected: f64 = (0..4).map(|j| ms[j] * (vs[i] - vs[j]) * dwdx(xs[i] - xs[j])).sum();
        assert!((rate[i] - expected).abs() <= 1e-12 * expected.abs().max(1e-12));
    }
}

#[test]
fn auxiliary_friction_gravity_interaction() {
    let state = ParticleState::new(
        Dimension::Two,
        vec![Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.2)],
        vec![Vec2::new(1.0, -2.0), Vec2::new(0.5, 0.5)],
        vec![1.0, 1.0],
        vec![0.1, 0.1],
    )
    .unwrap();

    let mut cfg = ForceConfig::conservative(Theta::One);
    cfg.friction = Some(0.3);
    let a = auxiliary_forces(&state, &cfg);
    for i in 0..2 {
        assert_eq!(a[i], state.velocities[i].scale(-0.3));
    }

    let mut cfg = ForceConfig::conservative(Theta::One);
    let g = Vec2::new(0.0, 9.81);
    cfg.external_potential = Some(ExternalPotential::Uniform { g });
    assert!(auxiliary_forces(&state, &cfg).iter().all(|&ai| ai == -g));

    let mut cfg = ForceConfig::conservative(Theta::One);
    cfg.interaction_kernel = Some(InteractionKernel::Anisotropic { a: 2.0, b: -0.5 });
    let a = auxiliary_forces(&state, &cfg);
    assert_eq!(a[0], -a[1]);
    assert!(a[0].norm() > 0.0);
}

#[test]
fn grid_and_brute_force_are_bit_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let state = random_state_2d(&mut rng, 300, 0.06);
    let eos = EosSpec::Tait { b: 100.0, rho0: 1.0, gamma: 7.0 };
    let visc = ViscosityParams { alpha: 0.3, beta: 0.5, sound_speed: SoundSpeed::FromEos };
    let mut results = Vec::new();
    for search in [NeighborSearch::BruteForce, NeighborSearch::CellGrid] {
        for pairing in [PairSmoothing::Gather, PairSmoothing::Average] {
            let ctx = SphContext::new(WENDLAND_2D).with_search(search).with_pairing(pairing);
            let s = with_density(&ctx, state.clone());
            let a = ctx.theta_acceleration(&s, &eos, Theta::One).unwrap();
            let v = ctx.artificial_viscosity_acceleration(&s, &eos, &visc).unwrap();
            let c = ctx.continuity_density_rate(&s).unwrap();
            results.push((pairing, s.densities, a, v, c));
        }
    }
    for pairing in [PairSmoothing::Gather, PairSmoothing::Average] {
        let same: Vec<_> = results.iter().filter(|r| r.0 == pairing).collect();
        assert_eq!(same[0].1, same[1].1);
        assert_eq!(same[0].2, same[1].2);
        assert_eq!(same[0].3, same[1].3);
        assert_eq!(same[0].4, same[1].4);
    }
}

#[test]
fn outputs_independent_of_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let state = random_state_2d(&mut rng, 500, 0.05);
    let eos = EosSpec::Tait { b: 100.0, rho0: 1.0, gamma: 7.0 };
    let ctx = SphContext::new(WENDLAND_2D);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let s = with_density(&ctx, state.clone());
            (s.densities.clone(), ctx.theta_acceleration(&s, &eos, Theta::One).unwrap())
        })
    };
    let base = run(1);
    for threads in [2, 8] {
        assert_eq!(run(threads), base);
    }
}

#[test]
fn translation_invariance_on_dyadic_lattice() {
    // Dyadic coordinates keep x_i + c - (x_j + c) exact.
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let positions: Vec<Vec2> = (0..60)
        .map(|_| Vec2::new(rng.gen_range(0..256) as f64 / 256.0, rng.gen_range(0..256) as f64 / 256.0))
        .collect();
    let n = positions.len();
    let state = ParticleState::new(Dimension::Two, positions, vec![Vec2::ZERO; n], vec![1.0; n], vec![0.125; n])
        .unwrap();
    let mut shifted = state.clone();
    for x in &mut shifted.positions {
        *x += Vec2::new(3.0, -5.0);
    }
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 1.4 };
    let ctx = SphContext::new(WENDLAND_2D);
    let a = with_density(&ctx, state);
    let b = with_density(&ctx, shifted);
    assert_eq!(a.densities, b.densities);
    for theta in [Theta::Zero, Theta::One] {
        assert_eq!(
            ctx.theta_acceleration(&a, &eos, theta).unwrap(),
            ctx.theta_acceleration(&b, &eos, theta).unwrap()
        );
    }
}

#[test]
fn mirror_symmetric_configuration() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let half: Vec<Vec2> = (0..20)
        .map(|_| Vec2::new(rng.gen_range(0.01..0.5), rng.gen_range(-0.5..0.5)))
        .collect();
    let mut positions = half.clone();
    positions.extend(half.iter().map(|p| Vec2::new(-p.x, p.y)));
    let n = positions.len();
    let state = ParticleState::new(Dimension::Two, positions, vec![Vec2::ZERO; n], vec![1.0; n], vec![0.2; n])
        .unwrap();
    let ctx = SphContext::new(WENDLAND_2D);
    let state = with_density(&ctx, state);
    let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
    let a = ctx.theta_acceleration(&state, &eos, Theta::One).unwrap();
    for i in 0..20 {
        let (l, r) = (a[i], a[i + 20]);
        assert!((l.x + r.x).abs() <= 1e-12 * l.norm().max(1e-12));
        assert!((l.y - r.y).abs() <= 1e-12 * l.norm().max(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_one_conserves_momentum(seed in 0u64..10_000, n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SphContext::new(WENDLAND_2D);
        let state = with_density(&ctx, random_state_2d(&mut rng, n, 0.3));
        let mut uniform = state.clone();
        uniform.smoothing_lengths = vec![0.3; n];
        let uniform = with_density(&ctx, uniform);
        let eos = EosSpec::Tait { b: 10.0, rho0: 1.0, gamma: 7.0 };
        let visc = ViscosityParams { alpha: 0.5, beta: 1.0, sound_speed: SoundSpeed::FromEos };
        let a = ctx.theta_acceleration(&uniform, &eos, Theta::One).unwrap();
        let v = ctx.artificial_viscosity_acceleration(&uniform, &eos, &visc).unwrap();
        let mut total = Vec2::ZERO;
        let mut scale = 0.0;
        for i in 0..n {
            let ai = a[i] + v[i];
            total += ai.scale(uniform.masses[i]);
            scale += uniform.masses[i] * ai.norm();
        }
        prop_assert!(total.norm() <= 1e-12 * scale + 1e-300, "{:?} vs {}", total, scale);
    }

    #[test]
    fn translation_invariance_within_roundoff(seed in 0u64..10_000, cx in -5.0f64..5.0, cy in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SphContext::new(WENDLAND_2D);
        let state = random_state_2d(&mut rng, 25, 0.3);
        let mut shifted = state.clone();
        for x in &mut shifted.positions {
            *x += Vec2::new(cx, cy);
        }
        let a = with_density(&ctx, state);
        let b = with_density(&ctx, shifted);
        for i in 0..25 {
            prop_assert!((a.densities[i] - b.densities[i]).abs() <= 1e-9 * a.densities[i]);
        }
    }
}
