//! Dataset-side procedures: the static-viewpoint video filter and the
//! weighted training-mixture sampler with its 1% single-image degenerate case.

mod filter;
mod mixture;

pub use filter::{static_view_filter, FilterError, CORNER_PATCH, STATIC_THRESHOLD};
pub use mixture::{mixture_sample, BatchDescriptor, MixtureSpec};
