use std::sync::Arc;

use hyperelm_core::autoencoder::{decode_hyper, decode_real, encode_hyper, encode_real, psnr, ssim, ImageRgb};
use hyperelm_core::catalog::check_properties;
use hyperelm_core::lorenz::{build_windows, prediction_gain, Encoding, Trajectory};
use hyperelm_core::realification::{
    frobenius, lstsq, matmul, matmul_left, matmul_right, phi_left, phi_left_matrix, phi_right, varphi,
    varphi_matrix,
};
use hyperelm_core::{builtin, AlgebraName, AlgebraSpec, ElmConfig, ElmModel, HMatrix, HNumber};
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = Arc<AlgebraSpec>> {
    (0..AlgebraName::ALL.len()).prop_map(|i| Arc::new(builtin(AlgebraName::ALL[i])))
}

fn number(alg: Arc<AlgebraSpec>) -> impl Strategy<Value = HNumber> {
    prop::collection::vec(-10.0..10.0f64, alg.dim()).prop_map(move |c| HNumber::new(alg.clone(), c).unwrap())
}

fn matrix(alg: Arc<AlgebraSpec>, rows: usize, cols: usize) -> impl Strategy<Value = HMatrix> {
    prop::collection::vec(-5.0..5.0f64, rows * cols * alg.dim())
        .prop_map(move |c| HMatrix::new(alg.clone(), rows, cols, c).unwrap())
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn triple() -> impl Strategy<Value = (HNumber, HNumber, HNumber)> {
    algebra().prop_flat_map(|a| (number(a.clone()), number(a.clone()), number(a)))
}

fn shapes() -> impl Strategy<Value = (HMatrix, HMatrix)> {
    (algebra(), 1..=6usize, 1..=6usize, 1..=6usize)
        .prop_flat_map(|(a, m, n, l)| (matrix(a.clone(), m, l), matrix(a, l, n)))
}

proptest! {
    #[test]
    fn product_is_bilinear((x, y, z) in triple()) {
        let left = x.add(&y).unwrap().multiply(&z).unwrap();
        let left_sum = x.multiply(&z).unwrap().add(&y.multiply(&z).unwrap()).unwrap();
        prop_assert!(close(left.coeffs(), left_sum.coeffs(), 1e-12));
        let right = z.multiply(&x.add(&y).unwrap()).unwrap();
        let right_sum = z.multiply(&x).unwrap().add(&z.multiply(&y).unwrap()).unwrap();
        prop_assert!(close(right.coeffs(), right_sum.coeffs(), 1e-12));
    }

    #[test]
    fn real_unit_is_identity((x, _, _) in triple()) {
        let one = HNumber::one(x.algebra().clone());
        prop_assert_eq!(&one.multiply(&x).unwrap(), &x);
        prop_assert_eq!(&x.multiply(&one).unwrap(), &x);
    }

    #[test]
    fn scaling_commutes_with_product((x, y, _) in triple(), alpha in -4.0..4.0f64) {
        let a = x.multiply(&y).unwrap().scale(alpha);
        let b = x.scale(alpha).multiply(&y).unwrap();
        let c = x.multiply(&y.scale(alpha)).unwrap();
        prop_assert!(close(a.coeffs(), b.coeffs(), 1e-12));
        prop_assert!(close(a.coeffs(), c.coeffs(), 1e-12));
    }

    #[test]
    fn embeddings_are_homomorphic((x, y, _) in triple()) {
        let xy = varphi(&x.multiply(&y).unwrap());
        let left = phi_left(&x).matmul(&column(&y)).unwrap();
        let right = phi_right(&y).matmul(&column(&x)).unwrap();
        prop_assert!(close(&xy, left.as_slice(), 1e-12));
        prop_assert!(close(&xy, right.as_slice(), 1e-12));
    }

    #[test]
    fn block_product_is_consistent((a, b) in shapes()) {
        let c = varphi_matrix(&matmul(&a, &b).unwrap());
        let blocks = phi_left_matrix(&a).matmul(&varphi_matrix(&b)).unwrap();
        prop_assert!(c.max_abs_diff(&blocks) < 1e-10);
    }

    #[test]
    fn both_product_paths_agree((a, b) in shapes()) {
        let left = matmul_left(&a, &b).unwrap();
        let right = matmul_right(&a, &b).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
    }

    #[test]
    fn frobenius_matches_realification(a in (algebra(), 1..=6usize, 1..=6usize).prop_flat_map(|(g, r, c)| matrix(g, r, c))) {
        let real = varphi_matrix(&a).frobenius();
        prop_assert!((frobenius(&a) - real).abs() <= 1e-12 * real.max(1.0));
    }

    #[test]
    fn lstsq_never_beats_zero((a, b) in (algebra(), 1..=7usize, 1..=4usize, 1..=3usize)
        .prop_flat_map(|(g, m, n, k)| (matrix(g.clone(), m, n), matrix(g, m, k))))
    {
        let x = lstsq(&a, &b).unwrap();
        let residual = frobenius(&matmul(&a, &x).unwrap().sub(&b).unwrap());
        prop_assert!(residual <= frobenius(&b) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn elm_is_deterministic_and_bounded(alg in algebra(), seed in any::<u64>(), x in prop::collection::vec(-3.0..3.0f64, 40)) {
        let d = alg.dim();
        let rows = 40 / (2 * d);
        let x = HMatrix::new(alg.clone(), rows, 2, x[..rows * 2 * d].to_vec()).unwrap();
        let t = x.clone();
        let config = ElmConfig::new(alg, 2, 5, 2, seed);
        let a = ElmModel::init(config.clone()).unwrap().train(&x, &t).unwrap();
        let b = ElmModel::init(config).unwrap().train(&x, &t).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.predict(&x).unwrap(), b.predict(&x).unwrap());
        let h = a.hidden(&x).unwrap();
        // tanh rounds to exactly +-1 once |x| exceeds about 19
        prop_assert!(h.coeffs().iter().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn gain_drops_twenty_db_per_decade(points in prop::collection::vec((-20.0..20.0f64, -20.0..20.0f64, 0.0..40.0f64), 5..40),
                                      errs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 40)) {
        let actual: Vec<[f64; 3]> = points.iter().map(|&(x, y, z)| [x, y, z]).collect();
        let pred = |s: f64| -> Vec<[f64; 3]> {
            actual.iter().zip(&errs).map(|(a, e)| [a[0] + s * e.0, a[1] + s * e.1, a[2] + s * e.2]).collect()
        };
        if let (Ok(g1), Ok(g10)) = (prediction_gain(&actual, &pred(1.0)), prediction_gain(&actual, &pred(10.0))) {
            if g1.is_finite() {
                prop_assert!((g1 - g10 - 20.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn windows_overlap(points in prop::collection::vec(prop::array::uniform3(-20.0..20.0f64), 5..30), window in 2..5usize) {
        prop_assume!(points.len() > window + 1);
        let traj = Trajectory { positions: points };
        let real = build_windows(&traj, window, &Encoding::Real).unwrap();
        for t in 0..real.len() - 1 {
            let last = &real.inputs.row_coeffs(t)[3 * (window - 1)..];
            let next = &real.inputs.row_coeffs(t + 1)[3 * (window - 2)..3 * (window - 1)];
            prop_assert_eq!(last, next);
        }
        let q = Encoding::Hypercomplex(Arc::new(builtin(AlgebraName::Quaternion)));
        let hyper = build_windows(&traj, window, &q).unwrap();
        prop_assert!(hyper.targets.coeffs().chunks(4).all(|e| e[0] == 0.0));
    }

    #[test]
    fn pixel_codecs_round_trip(bytes in prop::collection::vec(any::<u8>(), 3072)) {
        let img = vec![ImageRgb::from_planar(&bytes).unwrap()];
        let q = Arc::new(builtin(AlgebraName::CdMp));
        let h = encode_hyper(&img, q).unwrap();
        let r = encode_real(&img);
        prop_assert!(h.coeffs().iter().chain(r.coeffs()).all(|v| (-1.0..=1.0).contains(v)));
        prop_assert_eq!(decode_hyper(&h).unwrap(), img.clone());
        prop_assert_eq!(decode_real(&r).unwrap(), img);
    }

    #[test]
    fn metrics_are_symmetric(a in prop::collection::vec(any::<u8>(), 3072), b in prop::collection::vec(any::<u8>(), 3072)) {
        let a = ImageRgb::from_planar(&a).unwrap();
        let b = ImageRgb::from_planar(&b).unwrap();
        prop_assert_eq!(psnr(&a, &b), psnr(&b, &a));
        prop_assert!((ssim(&a, &b) - ssim(&b, &a)).abs() < 1e-14);
        let s = ssim(&a, &b);
        prop_assert!((-1.0..=1.0).contains(&s));
    }

    #[test]
    fn basis_commutativity_agrees_with_samples((x, y, _) in triple()) {
        let xy = x.multiply(&y).unwrap();
        let yx = y.multiply(&x).unwrap();
        if check_properties(x.algebra()).commutative {
            prop_assert!(close(xy.coeffs(), yx.coeffs(), 1e-12));
        }
    }
}

fn column(x: &HNumber) -> hyperelm_core::RealMatrix {
    hyperelm_core::RealMatrix::new(x.coeffs().len(), 1, x.coeffs().to_vec()).unwrap()
}

#[test]
fn noncommutative_algebras_fail_on_random_pairs() {
    // a random pair witnesses non-commutativity whenever the basis check does
    for name in AlgebraName::ALL {
        let alg = Arc::new(builtin(name));
        let x = HNumber::new(alg.clone(), (0..alg.dim()).map(|k| 0.3 + k as f64).collect()).unwrap();
        let y = HNumber::new(alg.clone(), (0..alg.dim()).map(|k| 1.7 - 0.6 * k as f64).collect()).unwrap();
        let commutes = close(x.multiply(&y).unwrap().coeffs(), y.multiply(&x).unwrap().coeffs(), 1e-12);
        assert_eq!(commutes, check_properties(&alg).commutative, "{}", name);
    }
    let t = Arc::new(builtin(AlgebraName::Tessarine));
    let q = Arc::new(builtin(AlgebraName::Quaternion));
    let (i, j) = (HNumber::basis(q.clone(), 1), HNumber::basis(q, 2));
    assert_ne!(i.multiply(&j).unwrap(), j.multiply(&i).unwrap());
    let (i, j) = (HNumber::basis(t.clone(), 1), HNumber::basis(t, 3));
    assert_eq!(i.multiply(&j).unwrap(), j.multiply(&i).unwrap());
}
