//! QC-LDPC design.
