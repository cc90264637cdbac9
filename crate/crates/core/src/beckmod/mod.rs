//! Beck modules: A-modules with a map P killing `A_+·M`, their morphisms,
//! square-zero extensions, change of base and localization.

mod basechange;
mod localize;
mod module;
mod sections;
mod sqzero;

pub use basechange::{base_change, check_pd_homomorphism, quotient_module, restrict_scalars, PresentedModule};
pub use localize::{localize_module, LocalizedModule};
pub use module::{
    check_beck_hom, hom_beck, is_beck_hom, module_from_pmap_restriction, trivial_module, verify_beck_module, zero_module,
    BeckModule,
};
pub use sections::{section_homs_bruteforce, SectionSearch, DEFAULT_SECTION_CAP};
pub use sqzero::{square_zero_extension, SquareZeroExtension};
