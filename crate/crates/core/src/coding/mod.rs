//! Nested coset codes, their square-root decoders, Körner–Marton source
//! codes and the two-sender message-sum code.

mod decoder;
pub mod km;
pub mod macsum;
pub mod ncc;
pub mod ptp;

pub use km::KmCode;
pub use macsum::{build_mac_sum_code, MacSumCode, MacSumParams, MacSumSpec};
pub use ncc::{choose_representatives, NestedCosetCode, Representatives};
pub use ptp::{build_ptp_code, PtpCodebook};
