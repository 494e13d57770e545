//! Definable sets of the first-order ring language: construction,
//! serialization, and evaluation over finite fields.

pub mod field;
pub mod lang;
pub mod poly;
pub mod lie;
pub mod transfer;
pub mod interp;
pub mod oracle;
pub mod catalog;
pub mod checks;
pub mod cli;
