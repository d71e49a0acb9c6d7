//! Shared numeric aliases.

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
