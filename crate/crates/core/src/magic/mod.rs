//! Magic unitaries as grids of concrete projections.

mod carrier;
mod grid;
mod ops;

pub use carrier::{carrier_certificate, CarrierCertificate, CarrierLine, CertificateSummary};
pub use grid::{verify_magic, GridKind, MagicReport, MagicUnitary};
pub use ops::{
    comultiply_grid, corner_embed, corner_restrict, gadget_append, pad_to, block_unitary,
    transpose_grid,
};
