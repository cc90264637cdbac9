//! Kähler differentials `I/I²` of a divided-power algebra as a Beck module,
//! the presented module `Ω_p`, the bijection between maps out of `I/I²` and
//! Beck derivations, and the conormal exact sequence of a p-ideal.

mod differentials;
mod omega;
mod represent;
mod sequence;

pub use differentials::{check_power_exchange, kaehler_differentials, verify_universal_derivation, KaehlerData};
pub use omega::{omega_p_presentation, omega_to_kaehler, verify_omega_iso, PresentedOmega};
pub use represent::{derivation_from_hom, hom_from_derivation, representability, Representability};
pub use sequence::{second_fundamental_sequence, FundamentalSequence};

#[cfg(test)]
mod tests;
