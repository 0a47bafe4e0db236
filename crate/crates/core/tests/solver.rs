use gmhd_core::checker::{compute_a1, TheoremInstance};
use gmhd_core::solver::{
    diagnostics, duhamel_phi, picard_solve, trajectory_norms, weighted_distance, write_diagnostics_csv,
    write_trajectory_snapshots, NormParams, SolverConfig, Specs, Trajectory,
};
use gmhd_core::spectral::{leray_project, sobolev_norm};
use gmhd_core::{Error, GFunction, Grid, MultiplierSpec, SpectralField};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid {
    Grid::new(2, 16).unwrap()
}

fn specs(g: GFunction) -> Specs {
    let s = MultiplierSpec::new(2.0, g).unwrap();
    Specs { l1: s, l2: s, l3: s }
}

fn small_field(seed: u64, amp: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    leray_project(&SpectralField::random_band_limited(grid(), 2, 3, &mut rng)).scaled(amp)
}

fn cfg(nodes: usize) -> SolverConfig {
    SolverConfig {
        nodes,
        t_final: 0.05,
        ..SolverConfig::default()
    }
}

#[test]
fn converged_trajectory_is_a_fixed_point() {
    let s = specs(GFunction::Log);
    let (u0, b0) = (small_field(1, 1e-2), small_field(2, 1e-2));
    let c = cfg(8);
    let (traj, diag) = picard_solve(&u0, &b0, &s, &c).unwrap();
    let again = duhamel_phi(&u0, &b0, &traj, &s, &c).unwrap();
    assert!(weighted_distance(&again, &traj, &c).unwrap() <= c.picard_tol);
    assert!(diag.iterate_residuals.windows(2).all(|w| w[1] <= w[0]));
    assert!(diag.estimated_ratio.unwrap() < 1.0);
    assert!(traj.max_divergence_residual() <= 1e-12);
}

#[test]
fn b_negation_symmetry() {
    let s = specs(GFunction::Unit);
    let (u0, b0) = (small_field(3, 1e-2), small_field(4, 1e-2));
    let (a, _) = picard_solve(&u0, &b0, &s, &cfg(8)).unwrap();
    let (b, _) = picard_solve(&u0, &b0.scaled(-1.0), &s, &cfg(8)).unwrap();
    for m in 0..a.len() {
        assert!(a.u[m].sub(&b.u[m]).unwrap().max_abs() <= 1e-14);
        assert!(a.b[m].add(&b.b[m]).unwrap().max_abs() <= 1e-14);
    }
}

#[test]
fn node_doubling_converges() {
    let s = specs(GFunction::Unit);
    let (u0, b0) = (small_field(5, 0.05), small_field(6, 0.05));
    let finals: Vec<SpectralField> = [4, 8, 16]
        .iter()
        .map(|&m| picard_solve(&u0, &b0, &s, &cfg(m)).unwrap().0.final_u().clone())
        .collect();
    let d1 = finals[1].sub(&finals[0]).unwrap().max_abs();
    let d2 = finals[2].sub(&finals[1]).unwrap().max_abs();
    assert!(d1 / d2 >= 1.8, "{d1:e} {d2:e}");
}

#[test]
fn trajectory_norms_of_semigroup_and_single_node() {
    let s = specs(GFunction::Unit);
    let u0 = small_field(7, 1.0);
    let b0 = small_field(8, 1.0);
    let c = SolverConfig {
        norms: NormParams {
            r0: 0.5,
            p0: 3.0,
            r1: 1.0,
            p1: 2.0,
            r2: 0.0,
            p2: 4.0,
        },
        a1: 0.25,
        ..cfg(4)
    };
    let lin = Trajectory::semigroup(&u0, &b0, &s, &c).unwrap();
    let n = trajectory_norms(&lin, &s, &c).unwrap();
    assert_eq!(n.u_deviation, 0.0);
    assert_eq!(n.b_deviation, 0.0);
    let expected = lin
        .times
        .iter()
        .zip(&lin.u)
        .map(|(t, u)| t.powf(0.25) * sobolev_norm(u, 1.0, 2.0).unwrap())
        .fold(0.0, f64::max);
    assert!((n.u_weighted - expected).abs() <= 1e-15 * expected);

    let zero = SpectralField::zero_vector(grid());
    let z = Trajectory::semigroup(&zero, &zero, &s, &c).unwrap();
    assert_eq!(trajectory_norms(&z, &s, &c).unwrap().total(), 0.0);
}

#[test]
fn a1_feeds_the_weighted_norm() {
    let inst = TheoremInstance {
        n: 3,
        r0: 0.5,
        r1: 2.0,
        r2: 0.0,
        p0: 3.0,
        p1: 3.0,
        p2: 3.0,
        gamma1: 5.0 + 1e-9,
        gamma2: 3.0,
        gamma3: 1.0,
        epsilon: 1e-9,
    };
    let a1 = compute_a1(&inst).unwrap();
    let c = SolverConfig {
        a1,
        norms: NormParams::from(&inst),
        ..cfg(4)
    };
    assert!(c.validate().is_ok());
    assert!((c.a1 - 0.3).abs() < 1e-12);
}

#[test]
fn diagnostics_zero_and_decay() {
    let s = specs(GFunction::Unit);
    let zero = SpectralField::zero_vector(grid());
    let z = Trajectory::semigroup(&zero, &zero, &s, &cfg(4)).unwrap();
    for row in diagnostics(&z, &s.l3, 1.0).unwrap() {
        assert_eq!((row.div_residual, row.e_kin, row.e_mag, row.e_filtered), (0.0, 0.0, 0.0, 0.0));
    }

    let k = [2i64, 1];
    let u0 = SpectralField::real_mode(grid(), &k, &[Complex64::new(-0.1, 0.0), Complex64::new(0.2, 0.0)]).unwrap();
    let linear = SolverConfig {
        nonlinear: false,
        ..cfg(4)
    };
    let (traj, _) = picard_solve(&u0, &zero, &s, &linear).unwrap();
    let sym = s.l1.symbol_k2(5.0);
    for row in diagnostics(&traj, &s.l3, 1.0).unwrap() {
        let expected = u0.energy() * (2.0 * row.t * sym).exp();
        assert!((row.e_kin - expected).abs() <= 1e-12 * u0.energy());
        // ⟨u, (1 - L3) u⟩ = (1 + 5) ‖u‖²
        assert!((row.e_filtered - 6.0 * row.e_kin).abs() <= 1e-12 * u0.energy());
    }
}

#[test]
fn blowup_and_nonconvergence_are_reported() {
    let s = specs(GFunction::Unit);
    let big = small_field(9, 1e4);
    let c = SolverConfig {
        t_final: 0.5,
        max_iters: 30,
        ..cfg(4)
    };
    match picard_solve(&big, &big, &s, &c) {
        Err(Error::Blowup { .. }) | Err(Error::NonConvergence { .. }) => {}
        other => panic!("expected divergence, got {other:?}"),
    }
    let c = SolverConfig {
        max_iters: 1,
        ..cfg(4)
    };
    let u0 = small_field(10, 1e-1);
    assert!(matches!(picard_solve(&u0, &u0, &s, &c), Err(Error::NonConvergence { iterations: 1, .. })));
}

#[test]
fn outputs_are_written() {
    let s = specs(GFunction::Unit);
    let u0 = small_field(11, 1e-2);
    let (traj, _) = picard_solve(&u0, &u0, &s, &cfg(3)).unwrap();
    let rows = diagnostics(&traj, &s.l3, 1.0).unwrap();
    let mut buf = Vec::new();
    write_diagnostics_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some("t,div_residual,E_kin,E_mag,E_filtered"));
    assert_eq!(text.lines().count(), 5);

    let dir = tempfile::tempdir().unwrap();
    let files = write_trajectory_snapshots(dir.path(), &traj).unwrap();
    assert_eq!(files.len(), 8);
    let (back, t) = gmhd_core::spectral::snapshot::read_snapshot(std::fs::File::open(&files[7]).unwrap()).unwrap();
    assert_eq!(t, traj.times[2]);
    assert_eq!(&back, traj.final_b());
}
