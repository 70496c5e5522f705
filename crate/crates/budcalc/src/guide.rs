//! The narrative guide, compiled straight from the book sources.
//!
//! Each chapter of `book/` is attached to an empty module here, so rustdoc
//! renders the guide alongside the API docs and — more importantly —
//! `cargo test` compiles and runs every code block in the book as a
//! doctest. The book cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}

#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}

#[doc = include_str!("../../../book/src/formal-groups.md")]
pub mod formal_groups {}

#[doc = include_str!("../../../book/src/cocycles.md")]
pub mod cocycles {}

#[doc = include_str!("../../../book/src/gamma.md")]
pub mod gamma {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
