//! Bundled example specifications.

pub const LLIST: &str = include_str!("../fixtures/llist.maude");
pub const LAZY_LIST: &str = include_str!("../fixtures/lazylist.maude");
pub const FOO: &str = include_str!("../fixtures/foo.maude");
pub const TICTACTOE: &str = include_str!("../fixtures/tictactoe.maude");

/// All fixtures with a short name each.
pub const ALL: &[(&str, &str)] = &[("llist", LLIST), ("lazylist", LAZY_LIST), ("foo", FOO), ("tictactoe", TICTACTOE)];
