mod common;

use proptest::prelude::*;
use rand::Rng;
use zzsim::linalg::{
    is_psd, majorizes, pauli, so3_to_su2, su2_to_so3, svd3_special, sym_eig, CMatrix, Mat3, Matrix, Su2,
};

fn mat3_strategy() -> impl Strategy<Value = Mat3> {
    prop::array::uniform3(prop::array::uniform3(-5.0f64..5.0))
}

fn rotation_strategy() -> impl Strategy<Value = Mat3> {
    (prop::array::uniform3(-1.0f64..1.0), -3.1f64..3.1)
        .prop_filter("nonzero axis", |(a, _)| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|(axis, angle)| su2_to_so3(&Su2::from_axis_angle(axis, angle)))
}

fn det3(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

#[test]
fn svd3_reconstructs_random_matrices() {
    let mut rng = common::rng(11);
    for _ in 0..10_000 {
        let m: Mat3 = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let d = svd3_special(&m);
        let r = d.reconstruct();
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[i][j] - m[i][j]).abs() <= 1e-12, "{m:?}");
            }
        }
        assert!(d.s[0] >= d.s[1] && d.s[1] >= d.s[2].abs());
        assert!((det3(&d.u) - 1.0).abs() < 1e-12 && (det3(&d.v) - 1.0).abs() < 1e-12);
        assert!(d.s[2] * det3(&m) >= -1e-15);
    }
}

#[test]
fn svd3_rank_deficient() {
    let m = [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 0.0]];
    let d = svd3_special(&m);
    assert!(d.s[1].abs() < 1e-12 && d.s[2].abs() < 1e-12);
    assert!((d.s[0] - (14.0f64 * 5.0).sqrt()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn svd3_factors_are_rotations(m in mat3_strategy()) {
        let d = svd3_special(&m);
        prop_assert!((det3(&d.u) - 1.0).abs() < 1e-11);
        let utu = mul3(&d.u, &[[d.u[0][0], d.u[1][0], d.u[2][0]], [d.u[0][1], d.u[1][1], d.u[2][1]], [d.u[0][2], d.u[1][2], d.u[2][2]]]);
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((utu[i][j] - id).abs() < 1e-11);
            }
        }
        // nuclear sum equals the trace norm: Σ singular values of M
        let mtm = Matrix::from_fn(3, 3, |i, j| (0..3).map(|k| m[k][i] * m[k][j]).sum());
        let sv: f64 = sym_eig(&mtm, 1e-12).unwrap().values.iter().map(|x| x.max(0.0).sqrt()).sum();
        prop_assert!((d.nuclear_sum() - sv).abs() < 1e-6 * (1.0 + sv));
    }

    #[test]
    fn lift_reproduces_adjoint_action(r in rotation_strategy()) {
        let u = so3_to_su2(&r).unwrap();
        let uc = u.to_cmatrix();
        for alpha in 0..3 {
            let lhs = uc.matmul(&pauli(alpha)).matmul(&uc.adjoint());
            let mut rhs = CMatrix::zeros(2, 2);
            for beta in 0..3 {
                rhs = rhs.add(&pauli(beta).scale(zzsim::linalg::C64::new(r[beta][alpha], 0.0)));
            }
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn lift_is_a_homomorphism_up_to_sign(a in rotation_strategy(), b in rotation_strategy()) {
        let ua = so3_to_su2(&a).unwrap();
        let ub = so3_to_su2(&b).unwrap();
        let uab = so3_to_su2(&mul3(&a, &b)).unwrap();
        prop_assert!(ua.mul(&ub).distance_up_to_sign(&uab) < 1e-10);
    }

    #[test]
    fn majorization_is_a_quasi_order(
        x in prop::collection::vec(-3.0f64..3.0, 4),
        y in prop::collection::vec(-3.0f64..3.0, 4),
        z in prop::collection::vec(-3.0f64..3.0, 4),
    ) {
        let centre = |v: Vec<f64>| { let m = v.iter().sum::<f64>() / 4.0; v.into_iter().map(|a| a - m).collect::<Vec<_>>() };
        let (x, y, z) = (centre(x), centre(y), centre(z));
        prop_assert!(majorizes(&x, &x, 1e-12).unwrap());
        if majorizes(&x, &y, 1e-12).unwrap() && majorizes(&y, &z, 1e-12).unwrap() {
            prop_assert!(majorizes(&x, &z, 2e-12).unwrap());
        }
        // the zero vector is majorized by every vector of zero sum
        prop_assert!(majorizes(&[0.0; 4], &x, 1e-12).unwrap());
    }
}

#[test]
fn sym_eig_residuals_on_random_matrices() {
    let mut rng = common::rng(5);
    for n in [1, 2, 3, 5, 8, 13, 21, 34, 64] {
        let a = common::random_symmetric(&mut rng, n);
        let spec = sym_eig(&a, 1e-12).unwrap();
        let v = spec.vectors.as_ref().unwrap();
        let scale = spec.values.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
        for (j, &lam) in spec.values.iter().enumerate() {
            let col = v.column(j);
            let av = a.matvec(&col);
            let res = av
                .iter()
                .zip(&col)
                .fold(0.0_f64, |m, (p, q)| m.max((p - lam * q).abs()));
            assert!(res <= 1e-9 * scale, "n={n} residual {res}");
        }
        assert!(spec.values.windows(2).all(|w| w[0] >= w[1]));
        assert!((spec.values.iter().sum::<f64>() - a.trace()).abs() < 1e-9 * scale * n as f64);
    }
}

#[test]
fn psd_examples() {
    assert!(is_psd(&Matrix::identity(3), 1e-9).unwrap());
    assert!(!is_psd(&Matrix::from_diag(&[1.0, -0.5]), 1e-9).unwrap());
    let ones = Matrix::from_fn(3, 3, |_, _| 1.0);
    assert!(is_psd(&ones, 1e-9).unwrap());
}
