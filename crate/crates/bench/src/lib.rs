//! Inputs shared by the benchmarks.

use std::sync::Arc;

use spinform_core::{IntersectionForm, SpinStructure};

pub fn standard(genus: usize) -> Arc<IntersectionForm> {
    Arc::new(IntersectionForm::standard(genus).expect("genus >= 1"))
}

/// Structure with alternating basis values.
pub fn sample_structure(genus: usize) -> SpinStructure {
    let index = 0x5555_5555_5555_5555u64 & ((1u64 << (2 * genus)) - 1);
    SpinStructure::from_index(standard(genus), index).expect("index fits")
}
