//! Closed-form bound for `f(n) ≤ f(⌈λ²n⌉) + √(an+b) + c`.

use serde::Serialize;

use super::ConstantsError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecursionParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda: f64,
    pub n0: u64,
    pub f_n0: f64,
}

impl RecursionParams {
    /// The instance used for h(n): a = 250, b = 6000, c = 60, λ = √(2/3),
    /// n₀ = 7, f(n₀) = 2692.
    pub fn h_instance() -> Self {
        RecursionParams { a: 250.0, b: 6000.0, c: 60.0, lambda: (2.0f64 / 3.0).sqrt(), n0: 7, f_n0: 2692.0 }
    }

    pub fn validate(&self) -> Result<(), ConstantsError> {
        let ok = self.a > 0.0
            && self.b > 0.0
            && self.c > 0.0
            && self.lambda > 0.0
            && self.lambda < 1.0
            && self.n0 as f64 > 1.0 / (1.0 - self.lambda * self.lambda);
        if ok {
            Ok(())
        } else {
            Err(ConstantsError::Domain(format!("recursion parameters out of range: {self:?}")))
        }
    }

    pub fn big_a(&self) -> f64 {
        self.a.sqrt() / (1.0 - self.lambda)
    }

    pub fn big_b(&self) -> f64 {
        let l2 = self.lambda * self.lambda;
        (self.b + self.a / (1.0 - l2)) / ((1.0 - self.lambda) * self.a.sqrt())
    }

    pub fn n0_tilde(&self) -> f64 {
        self.n0 as f64 - 1.0 / (1.0 - self.lambda * self.lambda)
    }

    /// `A(√n - λ√ñ₀) - c(log_{λ²}(n/Ñ₀) + 1) + B/√Ñ₀ + f(n₀)`.
    pub fn closed_form(&self, n: u64) -> Result<f64, ConstantsError> {
        self.validate()?;
        if n < self.n0 {
            return Err(ConstantsError::Domain(format!("n = {n} is below n0 = {}", self.n0)));
        }
        let nt = self.n0_tilde();
        let log = (n as f64 / nt).ln() / (self.lambda * self.lambda).ln();
        Ok(self.big_a() * ((n as f64).sqrt() - self.lambda * nt.sqrt()) - self.c * (log + 1.0)
            + self.big_b() / nt.sqrt()
            + self.f_n0)
    }

    /// Iterates the recursion with equality, `F(m) = f(n₀)` for `m ≤ n₀`.
    /// `next(n)` must return `⌈λ²n⌉`.
    pub fn iterate(&self, max_n: u64, next: impl Fn(u64) -> u64) -> Vec<f64> {
        let mut f = vec![self.f_n0; max_n as usize + 1];
        for n in self.n0 + 1..=max_n {
            let m = next(n);
            debug_assert!(m < n);
            f[n as usize] = f[m as usize] + (self.a * n as f64 + self.b).sqrt() + self.c;
        }
        f
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub max_n: u64,
    pub checked: u64,
    pub violations: Vec<u64>,
    pub min_margin: f64,
    pub min_margin_at: u64,
}

/// Compares the closed form against the exact iteration for the h instance,
/// where `⌈(2/3)n⌉` is computed in integers.
pub fn dominance_sweep(max_n: u64) -> DominanceReport {
    let p = RecursionParams::h_instance();
    let f = p.iterate(max_n, |n| (2 * n).div_ceil(3));
    let mut r =
        DominanceReport { max_n, checked: 0, violations: Vec::new(), min_margin: f64::INFINITY, min_margin_at: 0 };
    for n in p.n0..=max_n {
        let margin = p.closed_form(n).expect("valid") - f[n as usize];
        r.checked += 1;
        if margin < 0.0 {
            r.violations.push(n);
        }
        if margin < r.min_margin {
            r.min_margin = margin;
            r.min_margin_at = n;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_instance_constants() {
        let p = RecursionParams::h_instance();
        let a = 15.0 * 10f64.sqrt() + 10.0 * 15f64.sqrt();
        assert!((p.big_a() - a).abs() < 1e-10);
        assert!((p.big_a() - 86.1640).abs() < 1e-4);
        assert!((p.n0_tilde() - 4.0).abs() < 1e-12);
        assert!((p.big_b() - 2326.43).abs() < 0.01);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn precondition() {
        let mut p = RecursionParams::h_instance();
        p.n0 = 2;
        assert!(p.validate().is_err());
        assert!(RecursionParams::h_instance().closed_form(6).is_err());
    }

    #[test]
    fn small_sweep() {
        let r = dominance_sweep(5000);
        assert!(r.violations.is_empty());
        assert!(r.min_margin > 0.0);
    }
}
