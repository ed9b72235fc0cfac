//! Overflow-checked coefficient arithmetic. Wraparound is a bug, never a value.

#[inline]
pub(crate) fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow in addition")
}

#[inline]
pub(crate) fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .expect("coefficient overflow in multiplication")
}

#[inline]
pub(crate) fn neg(a: i64) -> i64 {
    a.checked_neg().expect("coefficient overflow in negation")
}
