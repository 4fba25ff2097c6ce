//! Exact enumeration of (k,l)-threshold sequences, ordered tuples of k-ary
//! trees and extended Motzkin paths, with the bijections between them and
//! the Raney-number identities that count them.
//!
//! ```
//! use raney::threshold::{count, enumerate, ThresholdParams};
//!
//! let params = ThresholdParams::new(3, 1, 2).unwrap();
//! assert_eq!(count(params), 7.into());
//! assert_eq!(enumerate(params).unwrap().count(), 7);
//! ```

pub mod ballot;
pub mod budget;
pub mod error;
pub mod exactmath;
pub mod paths;
pub mod threshold;
pub mod trees;
pub mod verify;

pub use error::Error;
pub use exactmath::{ExactInt, ExactRat};
