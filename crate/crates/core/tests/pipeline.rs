use localp2::fock::change_frame;
use localp2::mirror::{work_to_chart, Frame};
use localp2::rational::q;
use localp2::solver::gv::{gv_from_gw, gw_from_gv};
use localp2::solver::tables::{reference, Table, TableKind};
use localp2::solver::{self, GenusInputs, Mode, Solver, SolverConfig};

fn small(max_genus: u32) -> SolverConfig {
    let mut c = SolverConfig::new(max_genus);
    c.max_degree = 8;
    c.orders = solver::Orders::for_ranges(max_genus, 8, c.max_insertions, c.con_max);
    c
}

#[test]
fn tables_do_not_depend_on_a() {
    let mut runs = Vec::new();
    for a in [q(0, 1), q(1, 12), q(1, 3)] {
        let mut cfg = small(3);
        cfg.a = a;
        runs.push(solver::run(cfg, &solver::default_inputs(3, Mode::Joint)).unwrap().1);
    }
    for t in &runs[1..] {
        for kind in [TableKind::GwY, TableKind::GvY, TableKind::GwOrb, TableKind::GwCon] {
            assert_eq!(t.get(kind), runs[0].get(kind), "{kind}");
        }
    }
    assert_ne!(runs[0].ambiguity, runs[1].ambiguity);
}

#[test]
fn runs_are_deterministic() {
    let a = solver::run(small(3), &solver::default_inputs(3, Mode::Joint)).unwrap().1;
    let b = solver::run(small(3), &solver::default_inputs(3, Mode::Joint)).unwrap().1;
    assert_eq!(a, b);
}

#[test]
fn modes_agree_on_the_ambiguity() {
    let mut by_mode = Vec::new();
    for mode in [Mode::GwInput, Mode::Gap, Mode::Joint] {
        let (s, _) = solver::run(small(4), &solver::default_inputs(4, mode)).unwrap();
        by_mode.push(s.ambiguities);
    }
    assert_eq!(by_mode[0], by_mode[1]);
    assert_eq!(by_mode[0], by_mode[2]);
    assert_eq!(by_mode[0][&3].coeffs[0], q(1, 544320));
    assert_eq!(by_mode[0][&3].coeffs[4], q(373, 4128768));
}

#[test]
fn zero_point_is_frame_independent() {
    let (s, _) = solver::run(small(2), &solver::default_inputs(2, Mode::Joint)).unwrap();
    for c in &s.charts {
        let flat = change_frame(&c.family, Frame::Flat, &c.flat).unwrap();
        let back = change_frame(&flat, Frame::Theta, &c.flat).unwrap();
        let theta0 = c.family.entry(2, 0).unwrap();
        assert!(flat.entry(2, 0).unwrap().agrees_with(&work_to_chart(theta0)), "{}", c.chart);
        for (&(g, n), e) in c.family.entries() {
            assert!(back.entry(g, n).unwrap().agrees_with(e), "{} ({g}, {n})", c.chart);
        }
    }
}

#[test]
fn genus_two_sealed_values() {
    let (s, t) = solver::run(small(2), &solver::default_inputs(2, Mode::Joint)).unwrap();
    assert_eq!(s.ambiguities[&2].coeffs, vec![q(-1, 2160), q(1, 4320), q(-1, 7680)]);
    assert_eq!(t.gw_y[&(2, 1)], q(1, 80));
    assert_eq!(t.gw_orb[&(2, 3)], q(1, 19440));
    assert_eq!(t.gw_con[&(2, -2)], q(-1, 80));
}

#[test]
fn multicover_cross_checks() {
    let mut gv = Table::new();
    gv.insert((0, 1), q(3, 1));
    gv.insert((0, 2), q(-6, 1));
    gv.insert((1, 1), q(0, 1));
    gv.insert((1, 2), q(0, 1));
    let gw = gw_from_gv(&gv, 1, 2).unwrap();
    assert_eq!(gw[&(0, 2)], q(-45, 8));
    assert_eq!(gw[&(1, 1)], q(1, 4));
    assert_eq!(gv_from_gw(&gw, 1, 2).unwrap(), gv);

    let reference_gv = reference().table(TableKind::GvY);
    let reference_gw = reference().table(TableKind::GwY);
    assert_eq!(gw_from_gv(&reference_gv, 7, 15).unwrap(), reference_gw);
}

#[test]
fn inconsistent_joint_inputs_are_reported() {
    let mut s = Solver::new(small(2)).unwrap();
    let mut inp = GenusInputs::defaults(2, Mode::Joint);
    *inp.gv_low.get_mut(&2).unwrap() += q(1, 1);
    let err = s.step(&inp).unwrap_err();
    assert!(err.to_string().contains("inconsistent"), "{err}");
}

#[test]
fn precision_errors_name_the_window() {
    let mut cfg = small(2);
    cfg.orders.lr = 4;
    let Err(err) = solver::run(cfg, &solver::default_inputs(2, Mode::Joint)) else {
        panic!("a four-term window cannot reach degree 8");
    };
    assert!(matches!(err, solver::SolverError::Precision(_) | solver::SolverError::Series(_)), "{err}");
}
