use super::*;
use crate::algebra::{exp_bivector, Rotor};
use crate::boost::{boost_matrix, frame_triple};
use crate::rng::{self, random_bivector, random_event_in, random_rotor};

fn close(a: &Multivector, b: &Multivector, tol: f64) -> bool {
    (*a - *b).max_abs_coeff() <= tol
}

fn rel_err(a: &Multivector, b: &Multivector) -> f64 {
    let scale = a.norm().max(b.norm()).max(1e-300);
    (*a - *b).norm() / scale
}

#[test]
fn component_round_trip() {
    let f = Multivector::gamma(0).wedge(&Multivector::gamma(1)).scale(0.7)
        + Multivector::gamma(2).wedge(&Multivector::gamma(3)).scale(-1.3)
        + Multivector::gamma(1).wedge(&Multivector::gamma(2)).scale(0.4);
    let back = from_f_components(&f_components(&f));
    assert!(close(&f, &back, 1e-15));
}

#[test]
fn coulomb_examples() {
    let field = coulomb_field(1.0);
    // on the x1 axis at unit distance: E = (1, 0, 0), B = 0
    let f = field.eval(&[3.0, 1.0, 0.0, 0.0]).unwrap();
    let split = eb_decompose_fiducial(&f).unwrap();
    assert!((split.e[0] - 1.0).abs() <= 1e-14);
    assert!(split.e[1].abs() <= 1e-14 && split.e[2].abs() <= 1e-14);
    assert!(split.b.iter().all(|c| c.abs() <= 1e-14));

    // at (t, 0, 2, 0): E2 = q x^2 / |x|^3 = 2/8 = 0.25
    let f = field.eval(&[-1.0, 0.0, 2.0, 0.0]).unwrap();
    let split = eb_decompose_fiducial(&f).unwrap();
    assert!((split.e[1] - 0.25).abs() <= 1e-14);
    assert!(split.e[0].abs() <= 1e-14 && split.e[2].abs() <= 1e-14);

    // B identically zero at random events
    let mut rng = rng::seeded(11);
    for _ in 0..100 {
        let e = random_event_in(&mut rng, 2.0);
        if let Ok(f) = field.eval(&e) {
            let split = eb_decompose_fiducial(&f).unwrap();
            assert!(split.b.iter().all(|c| c.abs() <= 1e-13));
        }
    }

    assert!(matches!(
        field.eval(&[0.5, 0.0, 0.0, 0.0]),
        Err(FieldError::Singular { .. })
    ));
}

#[test]
fn coulomb_analytic_partials_match_central_differences() {
    let field = coulomb_field(1.0);
    let f = field.as_analytic().unwrap();
    let e = [0.2, 1.1, -0.4, 0.8];
    for mu in 0..4 {
        let exact = f.partial(mu, &e, Differentiation::Analytic).unwrap();
        let fd = f
            .partial(mu, &e, Differentiation::CentralDiff { h: 1e-4 })
            .unwrap();
        assert!(close(&exact, &fd, 1e-7), "partial mu={mu}");
    }
}

#[test]
fn pullback_by_identity_is_identity() {
    let field = coulomb_field(1.0);
    let pulled = pullback_field(&LorentzMatrix::IDENTITY, &field);
    let e = [0.3, 0.9, -0.2, 0.4];
    assert!(close(
        &pulled.eval(&e).unwrap(),
        &field.eval(&e).unwrap(),
        1e-14
    ));
}

#[test]
fn pullback_of_coulomb_frozen_value() {
    // v = 0.6 boost at (0, 0, 1, 0): Ebar = (0, 1.25, 0), Bbar = (0, 0, -0.75)
    let (l, _) = boost_matrix(0.6).unwrap();
    let pulled = pullback_field(&l, &coulomb_field(1.0));
    let split = eb_decompose_fiducial(&pulled.eval(&[0.0, 0.0, 1.0, 0.0]).unwrap()).unwrap();
    assert!((split.e[1] - 1.25).abs() <= 1e-13);
    assert!(split.e[0].abs() <= 1e-13 && split.e[2].abs() <= 1e-13);
    assert!((split.b[2] + 0.75).abs() <= 1e-13);
    assert!(split.b[0].abs() <= 1e-13 && split.b[1].abs() <= 1e-13);
}

#[test]
fn magnetic_field_is_velocity_cross_electric() {
    // Bbar = v_vec x Ebar with v_vec = (-v, 0, 0), at random events
    let v = 0.6;
    let field = boosted_coulomb_closed_form(1.0, v).unwrap();
    let vel = [-v, 0.0, 0.0];
    let mut rng = rng::seeded(12);
    let mut checked = 0;
    while checked < 100 {
        let e = random_event_in(&mut rng, 2.0);
        if field.singular_distance(&e).unwrap() < 0.3 {
            continue;
        }
        let split = eb_decompose_fiducial(&field.eval(&e).unwrap()).unwrap();
        let expected = cross3(vel, split.e);
        for i in 0..3 {
            assert!((split.b[i] - expected[i]).abs() <= 1e-12 * (1.0 + split.e[0].abs()));
        }
        checked += 1;
    }
}

#[test]
fn boosted_closed_form_at_zero_velocity_is_coulomb() {
    let boosted = boosted_coulomb_closed_form(1.5, 0.0).unwrap();
    let coulomb = coulomb_field(1.5);
    let mut rng = rng::seeded(13);
    for _ in 0..50 {
        let e = random_event_in(&mut rng, 2.0);
        if boosted.singular_distance(&e).unwrap() < 0.2 {
            continue;
        }
        assert!(rel_err(&boosted.eval(&e).unwrap(), &coulomb.eval(&e).unwrap()) <= 1e-14);
    }
}

#[test]
fn oracle_triangle_three_constructions_agree() {
    let q = 1.0;
    let v = 0.6;
    let (l, _) = boost_matrix(v).unwrap();
    let pulled = pullback_field(&l, &coulomb_field(q));
    let closed = boosted_coulomb_closed_form(q, v).unwrap();
    let lw = lienard_wiechert_uniform(q, [-v, 0.0, 0.0]).unwrap();

    let mut rng = rng::seeded(14);
    let mut checked = 0;
    while checked < 100 {
        let e = random_event_in(&mut rng, 2.0);
        if closed.singular_distance(&e).unwrap() < 0.3 {
            continue;
        }
        let a = pulled.eval(&e).unwrap();
        let b = closed.eval(&e).unwrap();
        let c = lw.eval(&e).unwrap();
        assert!(rel_err(&a, &b) <= 1e-12, "pullback vs closed at {e:?}");
        assert!(rel_err(&b, &c) <= 1e-12, "closed vs LW at {e:?}");
        assert!(rel_err(&a, &c) <= 1e-12, "pullback vs LW at {e:?}");
        checked += 1;
    }
}

#[test]
fn lienard_wiechert_edge_cases() {
    // zero velocity reduces to Coulomb
    let lw = lienard_wiechert_uniform(2.0, [0.0; 3]).unwrap();
    let coulomb = coulomb_field(2.0);
    let e = [0.7, 0.5, -1.0, 0.25];
    assert!(rel_err(&lw.eval(&e).unwrap(), &coulomb.eval(&e).unwrap()) <= 1e-14);

    // uniform motion: time translation + matching charge shift leaves the field unchanged
    let u = [0.3, -0.2, 0.1];
    let lw = lienard_wiechert_uniform(1.0, u).unwrap();
    let dt = 0.8;
    let e1 = [0.1, 0.6, 0.9, -0.4];
    let e2 = [e1[0] + dt, e1[1] + u[0] * dt, e1[2] + u[1] * dt, e1[3] + u[2] * dt];
    assert!(rel_err(&lw.eval(&e1).unwrap(), &lw.eval(&e2).unwrap()) <= 1e-13);

    assert!(lienard_wiechert_uniform(1.0, [1.0, 0.0, 0.0]).is_err());
}

#[test]
fn eb_split_basics() {
    // F = E1 g1 ^ g0 -> E = (E1, 0, 0), B = 0
    let f = Multivector::gamma(1).wedge(&Multivector::gamma(0)).scale(2.5);
    let split = eb_decompose_fiducial(&f).unwrap();
    assert_eq!(split.e, [2.5, 0.0, 0.0]);
    assert_eq!(split.b, [0.0, 0.0, 0.0]);

    // round trip on random bivectors
    let mut rng = rng::seeded(15);
    for _ in 0..100 {
        let b = random_bivector(&mut rng, 1.0);
        let split = eb_decompose_fiducial(&b).unwrap();
        assert!(close(&eb_compose_fiducial(&split), &b, 1e-14));
    }

    // non-bivector input is a contract violation
    assert!(eb_decompose_fiducial(&Multivector::gamma(0)).is_err());
}

#[test]
fn prime_frame_split_matches_moving_charge_form() {
    // E' in the boosted frame has the moving-charge closed form evaluated at
    // the primed coordinates x' = L x.
    let v = 0.6;
    let q = 1.0;
    let g = 1.0 / (1.0 - v * v as f64).sqrt();
    let (l, _) = boost_matrix(v).unwrap();
    let triple = frame_triple(v).unwrap();
    let coulomb = coulomb_field(q);

    let mut rng = rng::seeded(16);
    let mut checked = 0;
    while checked < 20 {
        let e = random_event_in(&mut rng, 1.5);
        if spatial_norm(&e) < 0.4 {
            continue;
        }
        let f = coulomb.eval(&e).unwrap();
        let split = eb_decompose(&f, &triple.primed).unwrap();

        let xp = l.apply(e);
        let s = xp[1] + v * xp[0];
        let rp = (g * g * s * s + xp[2] * xp[2] + xp[3] * xp[3]).sqrt();
        let rp3 = rp * rp * rp;
        let expected_e = [q * g * s / rp3, q * g * xp[2] / rp3, q * g * xp[3] / rp3];
        let expected_b = cross3([-v, 0.0, 0.0], expected_e);
        for i in 0..3 {
            assert!(
                (split.e[i] - expected_e[i]).abs() <= 1e-12,
                "E'[{i}] at {e:?}"
            );
            assert!(
                (split.b[i] - expected_b[i]).abs() <= 1e-12,
                "B'[{i}] at {e:?}"
            );
        }
        checked += 1;
    }
}

#[test]
fn dirac_operator_examples() {
    // constant field differentiates to zero
    let constant = MultivectorField::constant(Multivector::gamma(1).wedge(&Multivector::gamma(2)));
    let d = dirac_flat_at(&constant, &[0.1, 0.2, 0.3, 0.4], Differentiation::Analytic).unwrap();
    assert!(d.norm() <= 1e-15);

    // F(x) = x0 g1^g2 -> dF = g^0 g1 g2 = g0 g1 g2 exactly, and the split
    // puts everything in the wedge part
    let linear = MultivectorField::Analytic(
        AnalyticField::new(|e: &Event| {
            Ok(Multivector::gamma(1).wedge(&Multivector::gamma(2)).scale(e[0]))
        })
        .with_partials(|mu, _e| {
            Ok(if mu == 0 {
                Multivector::gamma(1).wedge(&Multivector::gamma(2))
            } else {
                Multivector::ZERO
            })
        }),
    );
    let e = [0.5, -0.3, 0.2, 0.9];
    let d = dirac_flat_at(&linear, &e, Differentiation::Analytic).unwrap();
    let expected = Multivector::gamma(0) * Multivector::gamma(1) * Multivector::gamma(2);
    assert!(close(&d, &expected, 1e-15));
    assert!(close(&d.grade_project(3), &expected, 1e-15));
    assert!(d.grade_project(1).norm() <= 1e-15);

    // finite differences agree at second order
    let fd = dirac_flat_at(&linear, &e, Differentiation::CentralDiff { h: 1e-3 }).unwrap();
    assert!(close(&fd, &expected, 1e-12));
}

#[test]
fn dirac_on_sampled_grid_matches_analytic() {
    let field = coulomb_field(1.0);
    let grid = EventGrid::centered([0.0, 2.0, 2.0, 2.0], 0.05, 5).unwrap();
    let sampled = MultivectorField::Sampled(field.sample(&grid));
    let d_sampled = dirac_operator_flat(&sampled, Differentiation::CentralDiff { h: 0.05 });
    let center = grid.event_at(grid.len() / 2);
    let from_grid = d_sampled.eval(&center).unwrap();
    let from_analytic =
        dirac_flat_at(&field, &center, Differentiation::CentralDiff { h: 0.05 }).unwrap();
    assert!(close(&from_grid, &from_analytic, 1e-12));

    // border samples are flagged
    if let MultivectorField::Sampled(s) = &d_sampled {
        assert!(s.samples[0].is_none());
    } else {
        panic!("expected sampled output");
    }
}

#[test]
fn maxwell_residual_of_coulomb_converges_at_second_order() {
    let field = coulomb_field(1.0);
    let zero = MultivectorField::zero();
    let grid = EventGrid::centered([0.0, 2.0, 2.0, 2.0], 0.1, 5).unwrap();
    let report = convergence_study(&field, &zero, &grid, &[0.1, 0.05, 0.025], 2.0);
    for ratio in &report.l2_ratios {
        assert!(
            (ratio / 4.0 - 1.0).abs() <= 0.1,
            "halving ratio {ratio} escaped 4 +/- 10%"
        );
    }
}

#[test]
fn maxwell_residual_detects_non_solutions() {
    // adding x1 * g2^g3 to the Coulomb field injects dF = g^1 g2 g3
    let base = coulomb_field(1.0);
    let wrong = {
        let base = base.clone();
        MultivectorField::Analytic(AnalyticField::new(move |e: &Event| {
            Ok(base.eval(e)?
                + Multivector::gamma(2).wedge(&Multivector::gamma(3)).scale(e[1]))
        }))
    };
    let zero = MultivectorField::zero();
    let grid = EventGrid::centered([0.0, 2.0, 2.0, 2.0], 0.1, 3).unwrap();
    let cfg = ResidualConfig::central(0.01);
    let good = maxwell_residual(&base, &zero, &grid, cfg);
    let bad = maxwell_residual(&wrong, &zero, &grid, cfg);
    assert!(good.total.linf() <= 1e-3);
    assert!(bad.total.l2() >= 0.5, "l2 = {}", bad.total.l2());
}

#[test]
fn residual_exclusion_zone_flags_near_singular_samples() {
    let field = coulomb_field(1.0);
    let zero = MultivectorField::zero();
    // grid straddles the origin
    let grid = EventGrid::centered([0.0; 4], 0.1, 3).unwrap();
    let res = maxwell_residual(&field, &zero, &grid, ResidualConfig::central(0.1));
    assert!(res.total.excluded() > 0);
    assert_eq!(res.report().excluded_points, res.total.excluded());
}

#[test]
fn action_density_examples() {
    let zero = Multivector::ZERO;
    // F = g0 ^ g1: coefficient is F.F = -1
    let f = Multivector::gamma(0).wedge(&Multivector::gamma(1));
    assert!((action_density_at(&f, &zero, &zero) + 1.0).abs() <= 1e-15);
    assert!((action_density_at(&f, &zero, &zero) - f.scalar_product(&f)).abs() <= 1e-15);
    assert_eq!(action_density_at(&zero, &zero, &zero), 0.0);

    // pointwise rotor invariance of F ^ star F
    let mut rng = rng::seeded(17);
    for _ in 0..50 {
        let f = random_bivector(&mut rng, 1.0);
        let r = random_rotor(&mut rng);
        let rotated = r.sandwich(&f);
        let d = (action_density_at(&rotated, &zero, &zero) - action_density_at(&f, &zero, &zero))
            .abs();
        assert!(d <= 1e-12);
    }

    // the A ^ star J term subtracts
    let a = Multivector::gamma(0).scale(2.0);
    let j = Multivector::gamma(0).scale(3.0);
    let expected = -a.scalar_product(&j);
    assert!((action_density_at(&zero, &a, &j) - expected).abs() <= 1e-15);
}

#[test]
fn worldline_free_particle_goes_straight() {
    let field = MultivectorField::zero();
    let start = ProbeCharge::at_rest(1.0, 1.0, [0.0; 4]);
    let run = integrate_worldline(start, &field, 1e-2, 100).unwrap();
    assert!((run.state.event[0] - 1.0).abs() <= 1e-12);
    assert!(run.state.event[1].abs() <= 1e-15);
    assert!(run.max_norm_drift <= 1e-15);
}

#[test]
fn worldline_constant_electric_field_is_hyperbolic() {
    // F = E g1 ^ g0 drives d v0 = -w v1, d v1 = -w v0 (w = qE/m): the
    // rapidity magnitude grows linearly, |atanh(v1/v0)| = w tau.
    let e_strength = 1.0;
    let f = MultivectorField::constant(
        Multivector::gamma(1).wedge(&Multivector::gamma(0)).scale(e_strength),
    );
    let start = ProbeCharge::at_rest(1.0, 1.0, [0.0; 4]);
    let dtau = 1e-3;
    let run = integrate_worldline(start, &f, dtau, 1000).unwrap();
    let v = run.state.velocity.vector_part();
    let rapidity = (v[1] / v[0]).atanh().abs();
    assert!(
        (rapidity - 1.0).abs() <= 1e-8,
        "rapidity {rapidity} vs closed form 1"
    );
    assert!((v[0] - 1.0f64.cosh()).abs() / 1.0f64.cosh() <= 1e-8);
    // the printed force law pushes the positive charge toward -x1
    assert!(v[1] < 0.0);
}

#[test]
fn worldline_constant_magnetic_field_conserves_speed() {
    let f = MultivectorField::constant(eb_compose_fiducial(&EBSplit {
        e: [0.0; 3],
        b: [0.0, 0.0, 1.0],
    }));
    let v1 = 0.5f64;
    let start = ProbeCharge {
        mass: 1.0,
        charge: 1.0,
        event: [0.0; 4],
        velocity: Multivector::vector([(1.0 + v1 * v1).sqrt(), v1, 0.0, 0.0]),
    };
    let speed0 = {
        let v = start.velocity.vector_part();
        (v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt()
    };
    let run = integrate_worldline(start, &f, 1e-3, 10_000).unwrap();
    let v = run.state.velocity.vector_part();
    let speed = (v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt();
    assert!((speed - speed0).abs() <= 1e-10, "speed drift {}", speed - speed0);
    assert!(run.state.velocity_norm_defect() <= 1e-12);
}

#[test]
fn worldline_aborts_on_singular_region() {
    // field with a singular slab: any trajectory crossing x1 < 0.5 aborts
    // and reports the steps completed so far
    let field = MultivectorField::Analytic(AnalyticField::new(|e: &Event| {
        if e[1] < 0.5 {
            Err(FieldError::Singular { event: *e })
        } else {
            Ok(Multivector::gamma(1).wedge(&Multivector::gamma(0)))
        }
    }));
    // the printed force law pushes a positive charge toward -x1
    let start = ProbeCharge::at_rest(1.0, 1.0, [0.0, 1.0, 0.0, 0.0]);
    match integrate_worldline(start, &field, 1e-2, 100_000) {
        Err(FieldError::IntegrationAborted { steps, .. }) => assert!(steps > 0),
        other => panic!("expected an aborted integration, got {other:?}"),
    }
}

#[test]
fn rotor_sandwich_preserves_action_density_on_boosted_field() {
    // sanity step for the scenario presets: exp_bivector-based rotors
    let f = boosted_coulomb_closed_form(1.0, 0.6)
        .unwrap()
        .eval(&[0.0, 0.0, 1.0, 0.0])
        .unwrap();
    let r: Rotor =
        exp_bivector(&(Multivector::gamma(2) * Multivector::gamma(1)).scale(0.23)).unwrap();
    let d = action_density_at(&r.sandwich(&f), &Multivector::ZERO, &Multivector::ZERO)
        - action_density_at(&f, &Multivector::ZERO, &Multivector::ZERO);
    assert!(d.abs() <= 1e-13);
}
