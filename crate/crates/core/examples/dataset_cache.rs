// The content-addressed dataset cache: importing a local copy of a known
// dataset and reading it back offline.

use linkpred::datasets::{lookup, Cache, Http};

pub fn run_example() -> linkpred::Result<()> {
    let dir = std::env::temp_dir().join(format!("linkpred-cache-example-{}", std::process::id()));
    let cache = Cache::new(&dir);
    let spec = lookup("facebook").expect("known dataset");

    let local = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/social.txt");
    let stored = cache.import(spec, local.as_ref())?;
    println!("stored {} as {}", spec.name, stored.sha256);

    let again = cache.fetch(spec, true, &Http)?;
    println!(
        "offline fetch: cache hit = {}, {}",
        again.cache_hit,
        again.path.display()
    );
    assert!(again.cache_hit);

    std::fs::remove_dir_all(&dir).map_err(|e| linkpred::Error::io("cleaning up", e))?;
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
