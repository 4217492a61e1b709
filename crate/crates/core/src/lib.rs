pub mod classifiers;
pub mod config;
pub mod error;
pub mod hankel;
pub mod measures;
pub mod numerics;
pub mod sequences;
pub mod transforms;

pub use classifiers::{Status, Verdict};
pub use config::Config;
pub use error::{Error, Result};

// Runs the guide's code blocks as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    pub mod sequences {}
    #[doc = include_str!("../../../book/src/verdicts.md")]
    pub mod verdicts {}
    #[doc = include_str!("../../../book/src/mid.md")]
    pub mod mid {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    pub mod transforms {}
    #[doc = include_str!("../../../book/src/measures.md")]
    pub mod measures {}
    #[doc = include_str!("../../../book/src/precision.md")]
    pub mod precision {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
