//! Doc-tests for the guide in `book/`. Each chapter becomes a module so a
//! failing snippet names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/simplicial-sets.md")]
pub mod simplicial_sets {}
#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}
#[doc = include_str!("../../../book/src/multiplication.md")]
pub mod multiplication {}
#[doc = include_str!("../../../book/src/homotopies.md")]
pub mod homotopies {}
#[doc = include_str!("../../../book/src/extensions.md")]
pub mod extensions {}
#[doc = include_str!("../../../book/src/mapping-spaces.md")]
pub mod mapping_spaces {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
