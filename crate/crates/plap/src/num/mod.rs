//! Shared numerical machinery: quadrature rules, root bracketing, and an
//! adaptive Runge–Kutta integrator with dense output.

pub mod gauss;
pub mod ode;
pub mod rootfind;
pub mod tanhsinh;
