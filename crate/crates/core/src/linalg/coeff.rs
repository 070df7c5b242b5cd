use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Integer coefficients used by the elimination kernels. Operations return
/// `None` on overflow so a fast fixed-width pass can fall back to `BigInt`.
pub(crate) trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&o.neg()?)
    }
    /// Inverse of a unit.
    fn unit_inverse(&self) -> Self;
}

impl Coeff for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn unit_inverse(&self) -> Self {
        *self
    }
}

impl Coeff for BigInt {
    fn is_nil(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn unit_inverse(&self) -> Self {
        self.clone()
    }
}

/// Element of a prime field carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Mp {
    pub v: u64,
    pub p: u64,
}

impl Coeff for Mp {
    fn is_nil(&self) -> bool {
        self.v == 0
    }
    fn is_unit(&self) -> bool {
        self.v != 0
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(self.v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(Mp { v: (self.v + o.v) % self.p, p: self.p })
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(Mp { v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64, p: self.p })
    }
    fn neg(&self) -> Option<Self> {
        Some(Mp { v: (self.p - self.v) % self.p, p: self.p })
    }
    fn unit_inverse(&self) -> Self {
        let mut base = *self;
        let mut e = self.p - 2;
        let mut acc = Mp { v: 1, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }
}

pub(crate) struct Overflow;
