//! Compensated accumulation (Neumaier's variant of Kahan summation).

use crate::geometry::ComplexAmp;

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// Real running sum with a compensation term.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedReal {
    sum: f64,
    comp: f64,
}

impl CompensatedReal {
    #[inline]
    pub fn add(&mut self, v: f64) {
        neumaier(&mut self.sum, &mut self.comp, v);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex running sum; real and imaginary parts are compensated independently.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    re: CompensatedReal,
    im: CompensatedReal,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: ComplexAmp) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn value(&self) -> ComplexAmp {
        ComplexAmp::new(self.re.value(), self.im.value())
    }
}

impl Extend<ComplexAmp> for CompensatedSum {
    fn extend<I: IntoIterator<Item = ComplexAmp>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Sums in iteration order, so a fixed input order gives a bit-identical result.
pub fn compensated_sum<I: IntoIterator<Item = ComplexAmp>>(terms: I) -> ComplexAmp {
    let mut acc = CompensatedSum::new();
    acc.extend(terms);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_term_survives_cancellation() {
        let terms = [ComplexAmp::new(1.0, 0.0), ComplexAmp::new(-1.0, 0.0), ComplexAmp::new(1e-20, 0.0)];
        assert_eq!(compensated_sum(terms), ComplexAmp::new(1e-20, 0.0));
        // plain summation order that loses the tail
        let terms = [ComplexAmp::new(1.0, 0.0), ComplexAmp::new(1e-20, 0.0), ComplexAmp::new(-1.0, 0.0)];
        assert_eq!(compensated_sum(terms).re, 1e-20);
    }

    #[test]
    fn many_small_terms() {
        let s = compensated_sum(std::iter::repeat(ComplexAmp::new(1e-8, 0.0)).take(1_000_000));
        assert!((s.re - 1e-2).abs() < 1e-18);
        assert_eq!(s.im, 0.0);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(compensated_sum(std::iter::empty()), ComplexAmp::new(0.0, 0.0));
    }
}
