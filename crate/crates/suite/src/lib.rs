//! Holds the `acceptance` test target (`tests/acceptance.rs`); there is no
//! library code here.
