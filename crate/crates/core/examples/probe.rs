use optocool_core::constants::{C, TAU};
use optocool_core::params::amplitude_from_power;

fn main() {
    let nu = TAU * 32.0e3;
    let omega0 = TAU * C / 780.0e-9;
    let amp = amplitude_from_power(10.0e-3, omega0).unwrap();
    let rabi = 4.0 * nu;
    let gamma = std::f64::consts::PI * rabi * rabi / (2.0 * C * amp * amp);
    println!("nu            = {nu:.17e}");
    println!("omega0        = {omega0:.17e}");
    println!("|alpha|^2     = {:.17e}", amp * amp);
    println!("gamma(4nu)    = {gamma:.17e}");
    println!("Gamma(0.3nu)  = {:.17e}", 0.3 * nu - gamma);
    println!("Gamma(0.1nu)  = {:.17e}", 0.1 * nu - gamma);
    println!("delta_bs      = {:.17e}", (4.0 * nu * nu - 2.0 * rabi * rabi) / (4.0 * nu));
    println!("delta_tms     = {:.17e}", (2.0 * rabi * rabi - 4.0 * nu * nu) / (4.0 * nu));
    println!("mass          = {:.17e}", 3515.0 * 240.0e-6 * 12.0e-6 * 0.66e-6);
}
