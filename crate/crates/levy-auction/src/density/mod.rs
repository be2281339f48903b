//! Stub, replaced by the density module.
