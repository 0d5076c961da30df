use std::sync::Arc;

use num_complex::Complex64;

use super::{MgfModel, Strip};
use crate::error::Result;

/// A bivariate MGF `(z1, z2) -> E[exp(z1 X1 + z2 X2)]`.
pub type BivariateFn = Arc<dyn Fn(Complex64, Complex64) -> Result<Complex64> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceKind {
    /// `X1 + X2`, `M(t, t)`
    Sum,
    /// `X1 - X2`, `M(t, -t)`
    Difference,
    /// `X1`, `M(t, 0)`
    First,
    /// `X2`, `M(0, t)`
    Second,
}

/// A univariate MGF obtained by restricting a bivariate one to a line.
#[derive(Clone)]
pub struct SliceMgf {
    inner: BivariateFn,
    kind: SliceKind,
    strip: Strip,
    label: String,
}

impl std::fmt::Debug for SliceMgf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SliceMgf")
            .field("kind", &self.kind)
            .field("strip", &self.strip)
            .field("label", &self.label)
            .finish()
    }
}

impl SliceMgf {
    pub fn new(inner: BivariateFn, kind: SliceKind, strip: Strip, label: impl Into<String>) -> Self {
        Self {
            inner,
            kind,
            strip,
            label: label.into(),
        }
    }

    pub fn kind(&self) -> SliceKind {
        self.kind
    }
}

impl MgfModel for SliceMgf {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.strip.check(z)?;
        let zero = Complex64::new(0.0, 0.0);
        match self.kind {
            SliceKind::Sum => (self.inner)(z, z),
            SliceKind::Difference => (self.inner)(z, -z),
            SliceKind::First => (self.inner)(z, zero),
            SliceKind::Second => (self.inner)(zero, z),
        }
    }

    fn strip(&self) -> Strip {
        self.strip
    }

    fn descriptor(&self) -> String {
        let what = match self.kind {
            SliceKind::Sum => "sum",
            SliceKind::Difference => "difference",
            SliceKind::First => "first marginal",
            SliceKind::Second => "second marginal",
        };
        format!("{what} slice of {}", self.label)
    }
}

#[derive(Debug, Clone)]
pub struct BivariateSlices {
    pub sum: SliceMgf,
    pub difference: SliceMgf,
    pub first: SliceMgf,
    pub second: SliceMgf,
}

/// The four univariate slices of `m`. Strips are supplied by the caller in
/// the order sum, difference, first, second.
pub fn bivariate_slices(m: BivariateFn, strips: [Strip; 4], label: &str) -> BivariateSlices {
    let mk = |kind, strip| SliceMgf::new(m.clone(), kind, strip, label);
    BivariateSlices {
        sum: mk(SliceKind::Sum, strips[0]),
        difference: mk(SliceKind::Difference, strips[1]),
        first: mk(SliceKind::First, strips[2]),
        second: mk(SliceKind::Second, strips[3]),
    }
}

/// Joint MGF of two independent variables, `M1(z1) M2(z2)`, with slice strips
/// derived from the marginals.
pub fn independent_pair<A, B>(a: A, b: B) -> (BivariateFn, [Strip; 4])
where
    A: MgfModel + 'static,
    B: MgfModel + 'static,
{
    let (sa, sb) = (a.strip(), b.strip());
    let sum = Strip {
        s_min: sa.s_min.max(sb.s_min),
        s_max: sa.s_max.min(sb.s_max),
    };
    let diff = Strip {
        s_min: sa.s_min.max(-sb.s_max),
        s_max: sa.s_max.min(-sb.s_min),
    };
    let f: BivariateFn = Arc::new(move |z1, z2| Ok(a.eval(z1)? * b.eval(z2)?));
    (f, [sum, diff, sa, sb])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgf::{exponential_mgf, normal_mgf};
    use approx::assert_relative_eq;

    #[test]
    fn independent_normals() {
        let (f, strips) = independent_pair(normal_mgf(0.0, 1.0).unwrap(), normal_mgf(0.0, 1.0).unwrap());
        let s = bivariate_slices(f.clone(), strips, "iid normal");
        let one = Complex64::new(1.0, 0.0);
        assert_relative_eq!(s.sum.eval(one).unwrap().re, std::f64::consts::E, max_relative = 1e-15);
        let z = Complex64::new(0.3, 1.7);
        assert_eq!(s.first.eval(z).unwrap(), f(z, Complex64::new(0.0, 0.0)).unwrap());
        // exchangeable pair: difference slice is even
        let d1 = s.difference.eval(z).unwrap();
        let d2 = s.difference.eval(-z).unwrap();
        assert_relative_eq!((d1 - d2).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn derived_strips() {
        let (_, strips) = independent_pair(exponential_mgf(1.0).unwrap(), exponential_mgf(2.0).unwrap());
        assert_eq!(strips[0].s_max, 1.0);
        assert_eq!(strips[1].s_min, -2.0);
        assert_eq!(strips[1].s_max, 1.0);
        assert!(s_err(&strips[0]));
    }

    fn s_err(s: &Strip) -> bool {
        s.check(Complex64::new(1.5, 0.0)).is_err()
    }
}
