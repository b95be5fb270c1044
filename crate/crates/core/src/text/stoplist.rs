//! The SMART stopword list, bundled as `data/smart_stoplist.txt`.
//!
//! The published list has 571 lines; `would` appears twice, so the loaded set
//! holds 570 distinct terms.

use std::collections::HashSet;
use std::sync::OnceLock;

const SMART_STOPLIST: &str = include_str!("../../data/smart_stoplist.txt");

fn stoplist() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        SMART_STOPLIST
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect()
    })
}

/// Membership in the SMART list. Expects an already lowercased term.
pub fn is_stopword(term: &str) -> bool {
    !term.is_empty() && stoplist().contains(term)
}

/// Raw lines of the bundled list, in file order.
pub fn stoplist_entries() -> impl Iterator<Item = &'static str> {
    SMART_STOPLIST.lines().filter(|l| !l.trim().is_empty())
}
