use serde::Serialize;

use super::MagicError;
use crate::simulator::SparseState;

/// Sorted, duplicate-free set of `width`-bit strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    width: u32,
    strings: Vec<u64>,
}

impl SupportSet {
    pub fn new(width: u32, strings: impl IntoIterator<Item = u64>) -> Result<Self, MagicError> {
        if width > 63 {
            return Err(MagicError::TooManyQubits { qubits: width, limit: 63 });
        }
        let mut strings: Vec<u64> = strings.into_iter().collect();
        if let Some(&bad) = strings.iter().find(|&&s| s >> width != 0) {
            return Err(MagicError::StringTooWide { string: bad, width });
        }
        strings.sort_unstable();
        strings.dedup();
        Ok(Self { width, strings })
    }

    pub fn of_state(state: &SparseState) -> Self {
        Self {
            width: state.num_qubits(),
            strings: state.support().collect(),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn strings(&self) -> &[u64] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}
