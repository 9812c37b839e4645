//! The tree-to-term construction: a recursive tree `T` of sequences is
//! turned into closed terms `B₀`, `B₁` that are identified in Hω exactly
//! when `T` is well-founded. Everything here is checked on a bounded domain
//! of sequence numbers.

mod codec;
mod kit;
mod tree;
mod verify;

use thiserror::Error;

pub use codec::{is_prefix, Codec, SeqNum};
pub use kit::{build_box, build_concat, build_d, guard_redexes, numeral_of, ConstructionKit, MAX_DOMAIN};
pub use tree::{tree_from_spec, TreeOracle, TreeSpec};
pub use verify::{
    b_unfold, bohm_out_args, box_trace, d_trace, extraction_check, head_trace_b, leaf_check,
    separation_check, verify_zeta, Extraction, HeadTraceB, Phase, SeparationVerdict, ZetaReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarendregtError {
    #[error("branching bound must be positive")]
    BadBase,
    #[error("entry {entry} is not below the branching bound {base}")]
    EntryTooLarge { entry: u64, base: u64 },
    #[error("sequence number overflows 64 bits")]
    CodeOverflow,
    #[error("tree is not prefix-closed: {0:?} lacks its parent")]
    NotPrefixClosed(Vec<u64>),
    #[error("domain bound {bound} exceeds the limit {limit}")]
    DomainTooLarge { bound: u64, limit: u64 },
    #[error("{what}: out of fuel")]
    FuelExhausted { what: String },
    #[error("unexpected term in {what}: {found}")]
    Unexpected { what: String, found: String },
    #[error("line {line}: {message}")]
    Spec { line: usize, message: String },
}
