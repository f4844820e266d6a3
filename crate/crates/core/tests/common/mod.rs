#![allow(dead_code)]

use proptest::prelude::*;
use xyent::model::{DensityMatrix, ModelParams};
use xyent::qmath::{ComplexMatrix, ComplexScalar};

pub fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// Parameters inside the single-decay-rate regime.
pub fn valid_params(max_nbar: f64) -> impl Strategy<Value = ModelParams> {
    (0.5..2.0f64, -0.1..0.1f64, -0.458..0.458f64, 0.1..1.0f64, 0.0..=max_nbar).prop_map(
        |(w, jr, dr, g, n)| ModelParams::new(w, jr * w, dr * w, g, n).unwrap(),
    )
}

/// Any parameters with positive rate, including far outside the restrictions.
pub fn any_params() -> impl Strategy<Value = ModelParams> {
    (-3.0..3.0f64, -2.0..2.0f64, -3.0..3.0f64, 0.05..3.0f64, 0.0..3.0f64)
        .prop_map(|(w, j, d, g, n)| ModelParams::new(w, j, d, g, n).unwrap())
}

pub fn matrix_from(entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_vec(4, entries.chunks(2).map(|p| c(p[0], p[1])).collect()).unwrap()
}

pub fn any_matrix() -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0..1.0f64, 32).prop_map(|v| matrix_from(&v))
}

pub fn hermitian_matrix() -> impl Strategy<Value = ComplexMatrix> {
    any_matrix().prop_map(|a| a.hermitian_part())
}

/// `A A† / tr(A A†)`; full rank almost surely.
pub fn density_matrix() -> impl Strategy<Value = DensityMatrix> {
    any_matrix()
        .prop_filter("nonzero", |a| a.frobenius_norm() > 1e-3)
        .prop_map(|a| {
            let m = &a * &a.adjoint();
            let tr = m.trace().re;
            DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
        })
}

/// Random physical X-state.
pub fn x_state() -> impl Strategy<Value = DensityMatrix> {
    (
        prop::array::uniform4(0.0..1.0f64),
        0.0..1.0f64,
        0.0..std::f64::consts::TAU,
        0.0..1.0f64,
        0.0..std::f64::consts::TAU,
    )
        .prop_filter("nonzero populations", |(p, ..)| p.iter().sum::<f64>() > 1e-3)
        .prop_map(|(p, u, a, v, b)| {
            let s: f64 = p.iter().sum();
            let p = p.map(|x| x / s);
            let r14 = u * (p[0] * p[3]).sqrt();
            let r23 = v * (p[1] * p[2]).sqrt();
            let mut m = ComplexMatrix::from_real_diagonal(&p).unwrap();
            m[(0, 3)] = ComplexScalar::from_polar(r14, a);
            m[(3, 0)] = m[(0, 3)].conj();
            m[(1, 2)] = ComplexScalar::from_polar(r23, b);
            m[(2, 1)] = m[(1, 2)].conj();
            DensityMatrix::new(m).unwrap()
        })
}

/// `e^{iφ} [[e^{iα}cos θ, e^{iβ}sin θ], [−e^{−iβ}sin θ, e^{−iα}cos θ]]`.
pub fn qubit_unitary() -> impl Strategy<Value = ComplexMatrix> {
    prop::array::uniform4(0.0..std::f64::consts::TAU).prop_map(|[t, a, b, ph]| {
        let g = ComplexScalar::from_polar(1.0, ph);
        let (s, co) = t.sin_cos();
        ComplexMatrix::from_vec(
            2,
            vec![
                g * ComplexScalar::from_polar(co, a),
                g * ComplexScalar::from_polar(s, b),
                -g * ComplexScalar::from_polar(s, -b),
                g * ComplexScalar::from_polar(co, -a),
            ],
        )
        .unwrap()
    })
}

/// Random pure single-qubit state as a 2-vector.
pub fn qubit_state() -> impl Strategy<Value = [ComplexScalar; 2]> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(t, p)| [c((t / 2.0).cos(), 0.0), ComplexScalar::from_polar((t / 2.0).sin(), p)])
}
