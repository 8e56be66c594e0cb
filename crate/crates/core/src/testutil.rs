//! Shared helpers for the unit tests: the GF(1801), n = 3 worked example.

use crate::autos::{AffineLinearMap, TriangularMap};
use crate::ffield::FieldMatrix;
use crate::group::LinearImmersion;
use crate::mpoly::SparsePoly;

pub const EX1_P: u64 = 1801;

/// lambda1, tau, lambda2 of the worked example:
/// tau = (x1 + 1, x2 + x1, x3 + x1 x2 + x1^2).
pub fn example1_pieces() -> (AffineLinearMap, TriangularMap, AffineLinearMap) {
    let p = EX1_P;
    let l1 = AffineLinearMap::linear_only(
        FieldMatrix::from_rows(p, &[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 0]]).unwrap(),
    )
    .unwrap();
    let l2 = AffineLinearMap::linear_only(
        FieldMatrix::from_rows(p, &[vec![0, 1, 1], vec![1, 0, 1], vec![0, 1, 0]]).unwrap(),
    )
    .unwrap();
    let shifts = vec![
        SparsePoly::parse("1", p, 3).unwrap(),
        SparsePoly::parse("1*x1", p, 3).unwrap(),
        SparsePoly::parse("1*x1^2 + 1*x1*x2", p, 3).unwrap(),
    ];
    let tau = TriangularMap::new(shifts, 2).unwrap();
    (l1, tau, l2)
}

/// rho(t) = (t, t - 1, t + 1).
pub fn example1_immersion() -> LinearImmersion {
    LinearImmersion::new(
        crate::ffield::FieldVector::new(EX1_P, vec![1, 1, 1]),
        crate::ffield::FieldVector::new(EX1_P, vec![0, 1800, 1]),
    )
    .unwrap()
}
