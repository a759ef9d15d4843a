//! Enumerating numerical semigroups and running a driver over them.

use noether_forge::corpus::counts_by_genus;
use noether_forge::report::{verify_lemma, verify_noether, Input};
use noether_forge::Result;

fn main() -> Result<()> {
    println!("numerical semigroups by genus: {:?}", counts_by_genus(8)?);
    for report in [
        verify_lemma(&Input::Corpus(8))?,
        verify_noether(&Input::Corpus(8), 3)?,
    ] {
        print!("{}", report.to_text());
    }
    Ok(())
}
