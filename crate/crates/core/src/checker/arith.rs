//! Right-hand sides of the parameter inequalities, generic over the number
//! type so the same formulas run in `f64` and in exact rationals.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::TheoremInstance;

pub(crate) trait Arith:
    Clone + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn int(v: i64) -> Self;
    fn real(v: f64) -> Self;
}

impl Arith for f64 {
    fn int(v: i64) -> Self {
        v as f64
    }
    fn real(v: f64) -> Self {
        v
    }
}

impl Arith for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    /// Exact binary value of a finite float.
    fn real(v: f64) -> Self {
        BigRational::from_float(v).expect("finite input")
    }
}

/// Instance parameters lifted into `T`, with `γ_i^- = γ_i - ε`.
#[derive(Clone)]
pub(crate) struct Params<T> {
    pub n: T,
    pub r0: T,
    pub r1: T,
    pub r2: T,
    pub p0: T,
    pub p1: T,
    pub p2: T,
    pub g1m: T,
    pub g2m: T,
    pub g3m: T,
}

impl<T: Arith> Params<T> {
    pub fn from_instance(inst: &TheoremInstance) -> Self {
        let eps = T::real(inst.epsilon);
        Params {
            n: T::int(inst.n as i64),
            r0: T::real(inst.r0),
            r1: T::real(inst.r1),
            r2: T::real(inst.r2),
            p0: T::real(inst.p0),
            p1: T::real(inst.p1),
            p2: T::real(inst.p2),
            g1m: T::real(inst.gamma1) - eps.clone(),
            g2m: T::real(inst.gamma2) - eps.clone(),
            g3m: T::real(inst.gamma3) - eps,
        }
    }

    fn one() -> T {
        T::int(1)
    }

    fn two() -> T {
        T::int(2)
    }

    fn three() -> T {
        T::int(3)
    }

    pub fn n_p0(&self) -> T {
        self.n.clone() / self.p0.clone()
    }

    pub fn n_p1(&self) -> T {
        self.n.clone() / self.p1.clone()
    }

    pub fn n_p2(&self) -> T {
        self.n.clone() / self.p2.clone()
    }

    /// J1: `1 - r0 + r1 - γ3^- + n/p0`.
    pub fn j1(&self) -> T {
        Self::one() - self.r0.clone() + self.r1.clone() - self.g3m.clone() + self.n_p0()
    }

    /// K1: `1 - 2r0 + r1 + 2n/p0 - n/p1`.
    pub fn k1(&self) -> T {
        Self::one() - Self::two() * self.r0.clone() + self.r1.clone() + Self::two() * self.n_p0() - self.n_p1()
    }

    /// J2: `2r1 - 2r0 + 2n/p0 - 2n/p1`.
    pub fn j2(&self) -> T {
        Self::two() * self.r1.clone() - Self::two() * self.r0.clone() + Self::two() * self.n_p0()
            - Self::two() * self.n_p1()
    }

    /// K2: `3r1 - 2r0 - γ3^- + 3n/p0 - 3n/p1`.
    pub fn k2(&self) -> T {
        Self::three() * self.r1.clone() - Self::two() * self.r0.clone() - self.g3m.clone()
            + Self::three() * self.n_p0()
            - Self::three() * self.n_p1()
    }

    /// J3: `r0 - 2r2 - γ3^- + 1 - n/p0 + 2n/p2`.
    pub fn j3(&self) -> T {
        self.r0.clone() - Self::two() * self.r2.clone() - self.g3m.clone() + Self::one() - self.n_p0()
            + Self::two() * self.n_p2()
    }

    /// K3: `1 - 2r2 + r1 - γ3^- - n/p1 + 2n/p2`.
    pub fn k3(&self) -> T {
        Self::one() - Self::two() * self.r2.clone() + self.r1.clone() - self.g3m.clone() - self.n_p1()
            + Self::two() * self.n_p2()
    }

    /// L: `1 - r0 + n/p0`.
    pub fn l(&self) -> T {
        Self::one() - self.r0.clone() + self.n_p0()
    }

    /// `max{2, 1 + γ3^- - n/p0 + 2n/p1}`.
    pub fn r1_floor(&self) -> T {
        let other = Self::one() + self.g3m.clone() - self.n_p0() + Self::two() * self.n_p1();
        max(Self::two(), other)
    }

    /// `min{n/p2, 2n/p2 - n/p0}`.
    pub fn r2_ceiling(&self) -> T {
        let other = Self::two() * self.n_p2() - self.n_p0();
        min(self.n_p2(), other)
    }

    // closed forms of the dominance differences

    pub fn k1_minus_j1_closed(&self) -> T {
        self.g3m.clone() - self.r0.clone() + self.n_p0() - self.n_p1()
    }

    pub fn k2_minus_j2_closed(&self) -> T {
        self.r1.clone() - self.g3m.clone() + self.n_p0() - self.n_p1()
    }

    pub fn k3_minus_j3_closed(&self) -> T {
        self.r1.clone() - self.r0.clone() + self.n_p0() - self.n_p1()
    }

    pub fn k2_minus_k1_closed(&self) -> T {
        Self::two() * self.r1.clone() - Self::one() - self.g3m.clone() + self.n_p0() - Self::two() * self.n_p1()
    }
}

pub(crate) fn max<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}
