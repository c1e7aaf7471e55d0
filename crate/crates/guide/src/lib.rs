//! The book's chapters, compiled as doc-tests so every snippet stays in sync
//! with the library. One module per chapter keeps failures easy to locate.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(algebras, "algebras.md");
chapter!(bundles, "bundles.md");
chapter!(twisted, "twisted.md");
chapter!(tduality, "tduality.md");
chapter!(scenarios, "scenarios.md");
chapter!(cli, "cli.md");

#[doc = include_str!("../../../README.md")]
pub mod readme {}
