use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Mat2;
use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

/// Unit-norm tolerance accepted by [`complete_to_unitary`].
pub const UNIT_VECTOR_TOL: f64 = 1e-12;

/// Which column of the completed unitary holds the given vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    First,
    Second,
}

/// Completes a unit vector `v ∈ ℂ²` to a unitary with `v` in the chosen column.
///
/// The other column is `(-conj(v₂), conj(v₁))` rotated by a global phase so its
/// first nonzero entry is real positive.
pub fn complete_to_unitary<T: Real>(v: [Complex<T>; 2], position: Column) -> Result<Mat2<T>> {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if !norm.is_finite() || (norm - T::one()).abs() > lit(UNIT_VECTOR_TOL) {
        return Err(Error::NotUnitVector { norm: as_f64(norm) });
    }
    let mut w = [-v[1].conj(), v[0].conj()];
    let lead = if w[0].norm() > T::epsilon() { w[0] } else { w[1] };
    if !lead.is_zero() {
        let phase = (lead / lead.norm()).conj();
        w = [w[0] * phase, w[1] * phase];
    }
    let (c0, c1) = match position {
        Column::First => (v, w),
        Column::Second => (w, v),
    };
    Ok(Mat2::from_rows_unchecked([[c0[0], c1[0]], [c0[1], c1[1]]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use proptest::prelude::*;

    #[test]
    fn basis_vectors_complete_to_identity() {
        let e1 = [cplx::<f64>(1.0, 0.0), cplx(0.0, 0.0)];
        let e2 = [cplx::<f64>(0.0, 0.0), cplx(1.0, 0.0)];
        let id = Mat2::<f64>::identity();
        assert_eq!(complete_to_unitary(e2, Column::Second).unwrap(), id);
        assert_eq!(complete_to_unitary(e1, Column::First).unwrap(), id);
    }

    #[test]
    fn completes_circular_vector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [cplx(h, 0.0), cplx(0.0, h)];
        let u = complete_to_unitary(v, Column::Second).unwrap();
        assert!(u.is_unitary(1e-12));
        assert_eq!(u.column(1), v);
        // complement (i/√2, 1/√2) phased to (1/√2, -i/√2)
        let expected = Mat2::new([[cplx(h, 0.0), cplx(h, 0.0)], [cplx(0.0, -h), cplx(0.0, h)]]).unwrap();
        assert!(u.max_diff(&expected) < 1e-15);
    }

    #[test]
    fn rejects_non_unit_vector() {
        let v = [cplx::<f64>(1.0, 0.0), cplx(0.1, 0.0)];
        assert!(matches!(
            complete_to_unitary(v, Column::First),
            Err(Error::NotUnitVector { .. })
        ));
    }

    proptest! {
        #[test]
        fn completion_is_unitary(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0, first in any::<bool>()) {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            prop_assume!(n > 1e-3);
            let v = [cplx(a / n, b / n), cplx(c / n, d / n)];
            let pos = if first { Column::First } else { Column::Second };
            let u = complete_to_unitary(v, pos).unwrap();
            prop_assert!(u.is_unitary(1e-12));
            prop_assert!((u * u.adjoint()).max_diff(&Mat2::identity()) < 1e-12);
            let col = if first { 0 } else { 1 };
            prop_assert_eq!(u.column(col), v);
        }
    }
}
