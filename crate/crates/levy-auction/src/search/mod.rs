//! Stub, replaced by the search module.
