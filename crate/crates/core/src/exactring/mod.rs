//! Exact arithmetic over `Z/p^e`: sparse polynomials, chart quotients,
//! truncated power series, linear algebra over `F_p`, and the text parser.

mod chart;
pub mod linalg;
mod modulus;
mod parse;
mod poly;
mod series;
pub mod upoly;

pub use chart::ChartRing;
pub use modulus::{is_prime, Modulus};
pub use parse::{parse_int_poly, parse_poly, parse_poly_in};
pub use poly::{grlex_cmp, lift_div_p, Exponent, IntPoly, ModPoly, PolyJson, TermJson};
pub use series::TruncSeries;
