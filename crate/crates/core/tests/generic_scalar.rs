//! The core is generic over the scalar; exercise the f32 instantiation with
//! its own (coarser) tolerance policy.

use conelip::certify::{certify_ball, CheckConfig};
use conelip::cone::PolyCone;
use conelip::convex::{AffinePiece, ConvexMap, Domain};
use conelip::lattice::lattice_ops;
use conelip::seminorm::SeminormSpec;
use conelip::vector::Vector;

#[test]
fn f32_cone_membership() {
    let cone: PolyCone<f32> = PolyCone::coordinate(2);
    assert!(cone.contains(&Vector::from_f64s(&[1.0, 2.0])).unwrap());
    assert!(!cone.contains(&Vector::from_f64s(&[1.0, -1.0])).unwrap());
    assert!(cone.is_pointed().unwrap());
}

#[test]
fn f32_lattice_and_seminorm() {
    let x: Vector<f32> = Vector::from_f64s(&[1.5, -2.0]);
    let ops = lattice_ops(&x, &x).unwrap();
    assert_eq!(ops.abs_x.0, vec![1.5f32, 2.0]);
    let p: SeminormSpec<f32> = SeminormSpec::sup_norm(2);
    assert_eq!(p.eval(&x).unwrap(), 2.0f32);
}

#[test]
fn f32_ball_certificate() {
    let f: ConvexMap<f32> = ConvexMap::max_affine(
        vec![vec![
            AffinePiece {
                weights: Vector::from_f64s(&[1.0, 0.0]),
                offset: 0.0,
            },
            AffinePiece {
                weights: Vector::from_f64s(&[-1.0, 0.0]),
                offset: 0.0,
            },
        ]],
        Domain::wide_box(2, 100.0f32),
        PolyCone::coordinate(1),
    )
    .unwrap();
    let cfg = CheckConfig {
        samples: 200,
        seed: 9,
    };
    let cert = certify_ball(
        &f,
        &SeminormSpec::abs(),
        &SeminormSpec::sup_norm(2),
        &Vector::zeros(2),
        1.0f32,
        0.5,
        Some(1.0),
        &cfg,
    )
    .unwrap();
    assert_eq!(cert.constant.sup_value(), 4.0f32);
}
