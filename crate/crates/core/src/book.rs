// The guide's chapters, compiled as doc-tests so every snippet in the book
// runs under `cargo test --doc`. One module per chapter keeps failures
// traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/ranking.md")]
pub mod ranking {}
#[doc = include_str!("../../../book/src/gain.md")]
pub mod gain {}
#[doc = include_str!("../../../book/src/cutoff.md")]
pub mod cutoff {}
#[doc = include_str!("../../../book/src/budget.md")]
pub mod budget {}
#[doc = include_str!("../../../book/src/charts.md")]
pub mod charts {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
