//! Physical constants (SI, CODATA 2018).

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Vacuum permeability [N/A^2].
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity [F/m].
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Newtonian gravitational constant [m^3/(kg s^2)].
pub const G_NEWTON: f64 = 6.674_30e-11;
/// Standard gravitational acceleration [m/s^2].
pub const G_EARTH: f64 = 9.806_65;
