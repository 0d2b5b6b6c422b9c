//! Every chapter of the guide becomes a module doc so that `cargo test --doc`
//! compiles and runs its listings. One module per chapter keeps failures
//! traceable to a file.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/series.md")]
pub mod series {}
#[doc = include_str!("src/hypergeometric.md")]
pub mod hypergeometric {}
#[doc = include_str!("src/gegenbauer.md")]
pub mod gegenbauer {}
#[doc = include_str!("src/generating_functions.md")]
pub mod generating_functions {}
#[doc = include_str!("src/legendre.md")]
pub mod legendre {}
#[doc = include_str!("src/poisson.md")]
pub mod poisson {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
#[doc = include_str!("../README.md")]
pub mod readme {}
