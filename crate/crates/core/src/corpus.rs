//! Bundled example networks in the text format, used by the test suite and
//! handy as CLI inputs (see the `networks/` directory).

/// Sequestration chain with full inflows/outflows; no infinitesimal
/// homeostasis for any rate choice.
pub const G1: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../networks/g1.crn"
));

/// Dimerization network with autocatalytic X3 production; admits an
/// infinitesimal homeostasis point.
pub const G2: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../networks/g2.crn"
));

/// Catalytic conversion loop; exhibits perfect homeostasis in X3.
pub const G3: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../networks/g3.crn"
));

/// Modified enzyme-substrate network; injective by the DSR criterion.
pub const ENZYME: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../networks/enzyme.crn"
));
