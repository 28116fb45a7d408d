use num_complex::Complex64;

/// A linear map `C^n → C^rows` given by its action and adjoint.
pub trait MeasurementOperator: Sync {
    /// Signal dimension `n`.
    fn dim(&self) -> usize;
    /// Number of measurements.
    fn rows(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    First,
    Second,
}

/// Paired sensing: `pairs()` pairs `(a¹_i, a²_i)` split into two arms that each
/// act like a [`MeasurementOperator`] with `pairs()` rows.
pub trait PairedSensing: Sync {
    fn dim(&self) -> usize;
    fn pairs(&self) -> usize;
    fn apply_arm(&self, arm: Arm, x: &[Complex64]) -> Vec<Complex64>;
    fn adjoint_arm(&self, arm: Arm, y: &[Complex64]) -> Vec<Complex64>;
    /// Upper bound on `(1/m) Σ (‖a¹_i‖² + ‖a²_i‖²)`, used as the default spectral shift.
    fn mean_pair_energy(&self) -> f64;
}

/// Both arms of a paired ensemble stacked into one operator with `2m` rows:
/// the first arm's measurements followed by the second arm's.
#[derive(Debug, Clone, Copy)]
pub struct Stacked<'a, P: ?Sized>(pub &'a P);

impl<P: PairedSensing + ?Sized> MeasurementOperator for Stacked<'_, P> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn rows(&self) -> usize {
        2 * self.0.pairs()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = self.0.apply_arm(Arm::First, x);
        out.extend(self.0.apply_arm(Arm::Second, x));
        out
    }

    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let m = self.0.pairs();
        assert_eq!(y.len(), 2 * m, "stacked adjoint length mismatch");
        let mut out = self.0.adjoint_arm(Arm::First, &y[..m]);
        for (o, v) in out.iter_mut().zip(self.0.adjoint_arm(Arm::Second, &y[m..])) {
            *o += v;
        }
        out
    }
}
