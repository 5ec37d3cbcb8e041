//! Double-double arithmetic for the few sums that cancel badly in `f64`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Twofold {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Twofold {
    pub(crate) const ONE: Twofold = Twofold { hi: 1.0, lo: 0.0 };
    pub(crate) const ZERO: Twofold = Twofold { hi: 0.0, lo: 0.0 };

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn powi(self, k: u32) -> Twofold {
        (0..k).fold(Twofold::ONE, |acc, _| acc * self)
    }
}

impl From<f64> for Twofold {
    fn from(x: f64) -> Self {
        Twofold { hi: x, lo: 0.0 }
    }
}

impl Add for Twofold {
    type Output = Twofold;
    fn add(self, o: Twofold) -> Twofold {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Twofold { hi, lo }
    }
}

impl Neg for Twofold {
    type Output = Twofold;
    fn neg(self) -> Twofold {
        Twofold { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Twofold {
    type Output = Twofold;
    fn sub(self, o: Twofold) -> Twofold {
        self + (-o)
    }
}

impl Mul for Twofold {
    type Output = Twofold;
    fn mul(self, o: Twofold) -> Twofold {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Twofold { hi, lo }
    }
}

impl Div for Twofold {
    type Output = Twofold;
    fn div(self, o: Twofold) -> Twofold {
        let q1 = self.hi / o.hi;
        let r = self - o * Twofold::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Twofold::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Twofold { hi, lo } + Twofold::from(q3)
    }
}
