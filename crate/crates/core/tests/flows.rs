use num_complex::Complex64;
use zigzag::autom::Generator;
use zigzag::necklace::{Alphabet, CycSum};
use zigzag::quiver::QuiverSpec;
use zigzag::repspace::{CMat, FiberKind, RepPoint};
use zigzag::scalar::GaussScalar;

fn exact(z: Complex64) -> GaussScalar {
    GaussScalar::from_c64(z).expect("finite")
}

/// `t·a*^k·(y_i* x_j*)` over the op-triangular alphabet.
fn op_word(spec: &QuiverSpec, k: usize, i: usize, j: usize, t: f64) -> CycSum {
    let mut w = vec![0; k];
    w.push(Alphabet::b_star_index(spec, i, j));
    CycSum::word(&w, exact(Complex64::new(t, 0.0)))
}

#[test]
fn elementary_flow_is_an_op_triangular_action() {
    for (n, r, seed) in [(2, 2, 1u64), (3, 3, 2), (4, 4, 3), (3, 4, 4)] {
        let spec = QuiverSpec::zigzag(r).unwrap();
        let p = RepPoint::random_fiber_point(n, r, Complex64::new(1.0, 0.0), seed, FiberKind::Cprime).unwrap();
        for k in 0..=3 {
            for alpha in (2..=r).step_by(2) {
                for beta in (1..=r).step_by(2) {
                    let t = 0.37;
                    let flowed = p.flow_elementary(k as u32, alpha, beta, t).unwrap();
                    let g = Generator::OpTriangular(op_word(&spec, k, alpha / 2, beta.div_ceil(2), t));
                    let acted = p.act_generator(&g).unwrap();
                    let err = (&flowed.x - &acted.x).norm()
                        + (&flowed.y - &acted.y).norm()
                        + (&flowed.v - &acted.v).norm()
                        + (&flowed.w - &acted.w).norm();
                    assert!(err < 1e-10, "n={n} r={r} k={k} α={alpha} β={beta}: {err}");
                }
            }
        }
    }
}

#[test]
fn identity_coupling_flow_matches_power_shift() {
    let tau = Complex64::new(0.8, 0.3);
    for (n, r, seed, k) in [(2, 2, 5u64, 1usize), (3, 2, 6, 2), (3, 3, 7, 3), (4, 2, 8, 2)] {
        let spec = QuiverSpec::zigzag(r).unwrap();
        let p = RepPoint::random_fiber_point(n, r, tau, seed, FiberKind::Cprime).unwrap();
        let t = 0.3;
        let ode = p.flow_ode(k as u32, &CMat::identity(r, r), t, 4000).unwrap();
        let f = CycSum::word(&vec![0; k], exact(-tau * t));
        let acted = p.act_generator(&Generator::OpTriangular(f)).unwrap();
        assert!(ode.orbit_equal(&acted, 1e-6).unwrap(), "n={n} r={r} k={k}");
        let _ = spec;
    }
}

#[test]
fn ode_reproduces_elementary_flow() {
    let p = RepPoint::random_fiber_point(3, 3, Complex64::new(1.0, 0.0), 12, FiberKind::Cprime).unwrap();
    let mut m = CMat::zeros(3, 3);
    m[(0, 2)] = Complex64::new(1.0, 0.0);
    let exact = p.flow_elementary(2, 1, 3, 0.5).unwrap();
    let ode = p.flow_ode(2, &m, 0.5, 2000).unwrap();
    let err = (&exact.x - &ode.x).norm() + (&exact.v - &ode.v).norm() + (&exact.w - &ode.w).norm();
    assert!(err < 1e-8, "{err}");
}
