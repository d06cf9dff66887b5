//! Exact scalar types: arbitrary-precision rationals and Gaussian rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used for certificates and embedded tables.
pub type Rat = BigRational;

/// `p/q` as a [`Rat`].
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer `p` as a [`Rat`].
pub fn rint(p: i64) -> Rat {
    Rat::from(BigInt::from(p))
}

/// Nearest `f64` to an exact rational. Good to one ulp for the magnitudes
/// used here; only for reporting, never for certificates.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Complex number with exact rational real and imaginary parts.
///
/// Just enough arithmetic for assembling Hermitian matrices from Pauli
/// coefficients and running Faddeev-LeVerrier on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        GaussRat { re: Rat::one(), im: Rat::zero() }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    /// `i^k` for `k` mod 4.
    pub fn i_pow(k: u8) -> Self {
        match k % 4 {
            0 => GaussRat { re: Rat::one(), im: Rat::zero() },
            1 => GaussRat { re: Rat::zero(), im: Rat::one() },
            2 => GaussRat { re: -Rat::one(), im: Rat::zero() },
            _ => GaussRat { re: Rat::zero(), im: -Rat::one() },
        }
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        GaussRat { re: &self.re * s, im: &self.im * s }
    }

    pub fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

/// Square matrix of Gaussian rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussMatrix {
    pub dim: usize,
    pub data: Vec<GaussRat>,
}

impl GaussMatrix {
    pub fn zeros(dim: usize) -> Self {
        GaussMatrix { dim, data: vec![GaussRat::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = GaussRat::one();
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a.mul(&o[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> GaussRat {
        let mut t = GaussRat::zero();
        for i in 0..self.dim {
            t = t.add(&self[(i, i)]);
        }
        t
    }

    pub fn is_hermitian(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self[(i, j)] != self[(j, i)].conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Coefficients `e_1..e_n` where the characteristic polynomial is
    /// `lambda^n - e_1 lambda^(n-1) + e_2 lambda^(n-2) - ...`; `e_k` is the
    /// sum of the k-by-k principal minors. A Hermitian matrix is positive
    /// semidefinite exactly when every `e_k >= 0`.
    pub fn principal_minor_sums(&self) -> Vec<Rat> {
        // Faddeev-LeVerrier: M_1 = I, c_k = -tr(A M_k)/k,
        // M_{k+1} = A M_k + c_k I, and e_k = (-1)^k c_k.
        let n = self.dim;
        let mut e = Vec::with_capacity(n);
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let t = am.trace();
            debug_assert!(t.is_real(), "trace of a power of a Hermitian matrix must be real");
            let ck = -t.re.clone() / Rat::from(BigInt::from(k as i64));
            e.push(if k % 2 == 0 { ck.clone() } else { -ck.clone() });
            m = am;
            for i in 0..n {
                m[(i, i)] = m[(i, i)].add(&GaussRat::from_rat(ck.clone()));
            }
        }
        e
    }
}

impl std::ops::Index<(usize, usize)> for GaussMatrix {
    type Output = GaussRat;
    fn index(&self, (i, j): (usize, usize)) -> &GaussRat {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GaussMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussRat {
        &mut self.data[i * self.dim + j]
    }
}

/// Signs of the principal-minor sums certify semidefiniteness.
pub fn is_psd_hermitian(m: &GaussMatrix) -> bool {
    m.is_hermitian() && m.principal_minor_sums().iter().all(|e| !e.is_negative())
}
