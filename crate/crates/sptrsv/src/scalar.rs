//! Floating-point abstraction shared by every module.
//!
//! The solvers run in either `f32` or `f64`. Besides ordinary arithmetic the
//! parallel kernels need one extra capability: sharing a solution vector
//! between threads with per-element atomic loads, stores, and subtraction.
//! Hardware has no atomic floating-point type, so [`AtomicScalar`] cells wrap
//! the value's bit pattern in an atomic integer of the same width; atomic
//! subtraction is a compare-and-swap retry loop on that bit pattern. A torn
//! read is therefore impossible: every access moves the full word.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

/// Element type of matrices and vectors. Implemented for `f32` and `f64`.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    /// Short name used in benchmark records ("f32" / "f64").
    const NAME: &'static str;

    /// Atomic cell holding one value of this type.
    type Atomic: AtomicScalar<Self>;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
}

/// One shared floating-point cell with word-sized atomic access.
pub trait AtomicScalar<T>: Send + Sync {
    fn new(value: T) -> Self;
    fn load(&self, order: Ordering) -> T;
    fn store(&self, value: T, order: Ordering);
    /// Atomically replace the cell with `previous - rhs`, returning the
    /// previous value. `order` applies to the successful exchange.
    fn fetch_sub(&self, rhs: T, order: Ordering) -> T;
}

macro_rules! impl_scalar {
    ($t:ty, $atomic:ident, $bits:ty, $atomic_bits:ty, $name:literal) => {
        /// `$t` value stored as its bit pattern in an atomic integer.
        ///
        /// `repr(transparent)` over the atomic integer — which itself has
        /// the representation of the plain integer, and hence of the float
        /// of the same width — so a slice of floats may be reinterpreted as
        /// a slice of these cells (see [`atomic_view`]).
        #[repr(transparent)]
        pub struct $atomic($atomic_bits);

        impl AtomicScalar<$t> for $atomic {
            fn new(value: $t) -> Self {
                Self(<$atomic_bits>::new(value.to_bits()))
            }

            #[inline]
            fn load(&self, order: Ordering) -> $t {
                <$t>::from_bits(self.0.load(order))
            }

            #[inline]
            fn store(&self, value: $t, order: Ordering) {
                self.0.store(value.to_bits(), order);
            }

            #[inline]
            fn fetch_sub(&self, rhs: $t, order: Ordering) -> $t {
                let mut current = self.0.load(Ordering::Relaxed);
                loop {
                    let next = (<$t>::from_bits(current) - rhs).to_bits();
                    match self
                        .0
                        .compare_exchange_weak(current, next, order, Ordering::Relaxed)
                    {
                        Ok(_) => return <$t>::from_bits(current),
                        Err(found) => current = found,
                    }
                }
            }
        }

        impl Scalar for $t {
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;
            const NAME: &'static str = $name;

            type Atomic = $atomic;

            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
        }
    };
}

impl_scalar!(f64, AtomicF64, u64, AtomicU64, "f64");
impl_scalar!(f32, AtomicF32, u32, AtomicU32, "f32");

/// Reinterpret a uniquely borrowed value slice as shared atomic cells over
/// the same memory, so parallel kernels can update a solution vector in
/// place without copying it in and out of atomic storage.
///
/// Soundness: the unique borrow proves no plain references alias the slice
/// for the lifetime of the view, every access through the view is atomic,
/// and the cell type is `repr(transparent)` over an atomic integer with the
/// same size and representation as the value type. Both are asserted; they
/// hold on every platform with lock-free word atomics.
pub(crate) fn atomic_view<T: Scalar>(x: &mut [T]) -> &[T::Atomic] {
    assert_eq!(
        std::mem::size_of::<T>(),
        std::mem::size_of::<T::Atomic>(),
        "atomic cell must be exactly one value wide"
    );
    assert_eq!(
        std::mem::align_of::<T>(),
        std::mem::align_of::<T::Atomic>(),
        "atomic cell alignment must match the value alignment"
    );
    unsafe { std::slice::from_raw_parts(x.as_mut_ptr().cast::<T::Atomic>(), x.len()) }
}

/// `max_i |a[i]|`.
pub fn inf_norm<T: Scalar>(v: &[T]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs().to_f64()))
}

/// `max_i |a[i] - b[i]| / max_i |b[i]|`, falling back to the absolute
/// difference when `b` is identically zero. Panics on length mismatch.
pub fn relative_inf_diff<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    assert_eq!(a.len(), b.len(), "vector lengths differ");
    let diff = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs().to_f64()));
    let scale = inf_norm(b);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}
