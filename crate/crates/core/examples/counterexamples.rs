//! Per-index statements that fail, replayed from the pinned fixtures.

use maxspec::inequalities::{find, pinned_fixtures};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for f in pinned_fixtures() {
        let (r, ok) = f.run()?;
        let row = find(&f.key)?;
        let at = f
            .inputs
            .index
            .map(|i| format!(" at i = {}", i + 1))
            .unwrap_or_default();
        println!("{:<18} {}{at}", f.key, row.statement);
        println!("{:<18} lhs {} rhs {} -> {:?}", "", r.lhs, r.rhs, r.verdict);
        assert!(ok);
    }
    Ok(())
}
