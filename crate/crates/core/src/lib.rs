//! Fixed points of Atkin-Lehner involutions on the modular curves
//! X_0(N), and the question of which of them are Weierstrass points.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`]: integer utilities (Kronecker symbol, factoring, modular
//!   square roots).
//! * [`rational`]: a small exact rational type.
//! * [`quadforms`]: binary quadratic forms, reduction, class numbers,
//!   and lifting form classes to level N.
//! * [`fixedpoints`]: the fixed-point counting formula nu(Q; N), its
//!   closed forms, and the enumeration of the fixed points of the full
//!   involution as exact CM points.
//! * [`weierstrass`]: genus data, the quotient-genus criterion, and the
//!   classification of levels where the criterion decides.
//! * [`wronskian`]: the numerical determinant test with rigorous error
//!   control, for the levels the criterion leaves open.
//! * [`table1`]: a checked-in transcription of the reference list of
//!   fixed points on those levels, used as a regression oracle.

pub mod arith;
pub mod fixedpoints;
pub mod quadforms;
pub mod rational;
pub mod table1;
pub mod weierstrass;
pub mod wronskian;
