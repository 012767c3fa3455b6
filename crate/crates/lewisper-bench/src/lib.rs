//! Shared inputs for the kernel benchmarks.

use lewisper::maass::{hejhal_solve, MaassForm, Parity};

/// The odd cusp form with R ≈ 9.5337 at K = 25.
pub fn odd_form() -> MaassForm {
    hejhal_solve((9.4, 9.7), Parity::Odd, 25, 0.2).expect("solver finds the form").form
}
