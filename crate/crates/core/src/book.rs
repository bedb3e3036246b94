// Guide chapters, included so their snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/graphs.md")]
mod graphs {}
#[doc = include_str!("../../../book/src/hosts.md")]
mod hosts {}
#[doc = include_str!("../../../book/src/verification.md")]
mod verification {}
#[doc = include_str!("../../../book/src/search.md")]
mod search {}
#[doc = include_str!("../../../book/src/spectrum.md")]
mod spectrum {}
#[doc = include_str!("../../../book/src/formats.md")]
mod formats {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
