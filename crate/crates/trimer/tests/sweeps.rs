use trimer::sweep::{run_sweep, Axis, Base, Dataset, Quantity, RealUnits, SweepMode, SweepSpec};
use trimer::CouplingParams;

fn num(d: &Dataset, col: &str) -> Vec<f64> {
    d.column(col).unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
}

fn base(j1: f64) -> Base {
    Base::Dimensionless { params: CouplingParams { j: 1.0, j1, h: 0.0 }, t: 0.0 }
}

#[test]
fn gs_map_spin1_dimer_region() {
    let spec = SweepSpec {
        mode: SweepMode::GsMap,
        base: base(0.0),
        axis1: Axis::new(-2.0, 4.0, 61),
        axis2: Some(Axis::new(0.0, 3.5, 71)),
        quantities: Quantity::ALL.to_vec(),
    };
    let d = run_sweep(&spec).unwrap();
    assert_eq!(d.rows.len(), 61 * 71);
    let (j1, h) = (num(&d, "J1"), num(&d, "h"));
    let (s1s2, tri) = (num(&d, "n_s1_s2"), num(&d, "n_tri"));
    let k = (0..d.rows.len()).find(|&k| j1[k] == 2.0 && (h[k] - 0.5).abs() < 1e-12).unwrap();
    assert!((s1s2[k] - 1.0).abs() < 1e-9);
    assert_eq!(tri[k], 0.0);
    // saturated above h = 2.5 for J1 < J
    for k in 0..d.rows.len() {
        if h[k] > 2.5 + 1e-9 && j1[k] < 1.0 {
            for q in ["n_mu_s1", "n_s1_s2", "n_mu_full", "n_s1_full", "n_tri"] {
                assert_eq!(num(&d, q)[k], 0.0, "{q} at J1={} h={}", j1[k], h[k]);
            }
        }
    }
}

#[test]
fn thermal_map_activation() {
    let spec = SweepSpec {
        mode: SweepMode::ThermalMap,
        base: base(1.5),
        axis1: Axis::new(0.0, 1.0, 11),
        axis2: Some(Axis::new(0.1, 1.5, 8)),
        quantities: vec![Quantity::NTri],
    };
    let d = run_sweep(&spec).unwrap();
    let (t, tri) = (num(&d, "T"), num(&d, "n_tri"));
    for k in 0..d.rows.len() {
        if t[k] == 0.0 {
            assert_eq!(tri[k], 0.0);
        }
    }
    assert!(tri.iter().any(|&x| x > 0.1));
}

#[test]
fn parallel_assembly_is_bit_identical() {
    let spec = SweepSpec {
        mode: SweepMode::ThermalMap,
        base: base(0.7),
        axis1: Axis::new(0.0, 2.0, 40),
        axis2: Some(Axis::new(0.0, 3.0, 40)),
        quantities: Quantity::ALL.to_vec(),
    };
    let a = run_sweep(&spec).unwrap().to_csv().unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| run_sweep(&spec).unwrap().to_csv().unwrap());
    assert_eq!(a, b);
}

#[test]
fn real_unit_sweep_matches_dimensionless() {
    let u = RealUnits { j_cm1: 90.3, j1_cm1: 0.0, g: 2.1667, b_tesla: 0.0, t_kelvin: 0.0 };
    let spec = SweepSpec {
        mode: SweepMode::TScan,
        base: Base::Real(u),
        axis1: Axis::new(10.0, 200.0, 20),
        axis2: None,
        quantities: vec![Quantity::NTri],
    };
    let d = run_sweep(&spec).unwrap();
    for (t, n) in num(&d, "T_kelvin").into_iter().zip(num(&d, "n_tri")) {
        let (p, kt) = RealUnits { t_kelvin: t, ..u }.dimensionless().unwrap();
        let m = trimer::full_report(&p, trimer::Temperature::from_kt(kt).unwrap()).unwrap().n_tri;
        assert!((n - m).abs() < 1e-12);
    }
}
