//! Formal Fourier-coefficient engine over abstract arithmetic settings:
//! Eisenstein series, Hecke operators, the modified series and their
//! constant-term and determinant calculus.

pub mod constants;
pub mod family;
pub mod modified;
pub mod qexp;
pub mod setting;

pub use modified::{modified_ol_w1, modified_w_k};
pub use qexp::{
    eisenstein_series, hecke_t, hecke_u, level_raise, ChiRealization, PsiRealization, QExpansion,
    Realization,
};
pub use setting::{ArithmeticSetting, CuspData, IdealIndex};
