//! Write the full report bundle to a directory (default `bundle`).

use std::path::PathBuf;

use mirrorstate::cli::write_bundle;

fn main() -> mirrorstate::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "bundle".into()));
    let files = write_bundle(&out, 0, serde_json::json!({ "source": "example" }))?;
    for f in files {
        println!("{}", out.join(f).display());
    }
    Ok(())
}
