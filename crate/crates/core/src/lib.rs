pub mod error;
pub mod numeric;

pub use error::{Error, Result};
pub mod dedekind;
pub mod density;
pub mod erdos;
pub mod lseries;
pub mod moments;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/erdos-functions.md")]
    pub struct ErdosFunctions;
    #[doc = include_str!("../../../book/src/certified-values.md")]
    pub struct CertifiedValues;
    #[doc = include_str!("../../../book/src/dedekind-sums.md")]
    pub struct DedekindSums;
    #[doc = include_str!("../../../book/src/moments.md")]
    pub struct Moments;
    #[doc = include_str!("../../../book/src/density.md")]
    pub struct Density;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
