//! Bracket the threshold where alpha drops to 1.

use iso_compare::football::{alpha_as_written, epsilon0, Epsilon0, Method};

fn main() -> iso_compare::Result<()> {
    match epsilon0(Method::Oracle)? {
        Epsilon0::Bracket { lo, hi, iterations } => {
            println!("oracle: eps0 in [{lo:.6}, {hi:.6}] after {iterations} bisections")
        }
        Epsilon0::NoRoot { reason, .. } => println!("oracle: no root ({reason})"),
    }

    match epsilon0(Method::AsWritten)? {
        Epsilon0::Bracket { lo, hi, .. } => println!("as written: [{lo:.6}, {hi:.6}]"),
        Epsilon0::NoRoot { reason, violations } => {
            println!("as written: no root ({reason}), {} domain violations", violations.len());
            let sample = alpha_as_written(0.3)?;
            if let Some(v) = sample.violations.first() {
                println!("  e.g. at eps = 0.3: {v:?}");
            }
        }
    }
    Ok(())
}
