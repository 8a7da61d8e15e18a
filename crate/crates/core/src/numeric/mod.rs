//! Low-level numerical machinery: quadrature, root finding, ODE stepping.

pub mod quadrature;
pub mod rootfind;
pub mod runge_kutta;
