//! The free fibration on a functor and quasi-rari sections.

mod comma;
mod pack;
mod section;

pub use comma::{arrow_bicategory, oplax_comma, p_l_between, Comma};
pub use pack::{lift_to_pair, p_l, pack, pair_to_lift, s_l, unpack, ArrowSection, InducedArrow, Triple};
pub use section::{
    build_lax_section, check_composition_condition, check_composition_condition_2rari,
    check_identity_condition, equivalence_1cell,
    is_2rari_universal, is_rari_universal_1cell, lift_equivalence, rari_universal_lift,
    section_equivalence, synthesize_choices, upgrade_section_to_pseudo, EquivalenceData,
    SectionChoices,
};
