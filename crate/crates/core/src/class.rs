use core::fmt;
use core::str::FromStr;

use crate::error::CoreError;

/// Traffic label of a MIB record: normal traffic or one of seven attacks.
///
/// The declaration order is the canonical class order used for every
/// tie-break in the crate.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrafficClass {
    Normal,
    TcpSyn,
    UdpFlood,
    IcmpEcho,
    HttpFlood,
    Slowloris,
    Slowpost,
    BruteForce,
}

impl TrafficClass {
    pub const COUNT: usize = 8;

    pub const ALL: [TrafficClass; 8] = [
        TrafficClass::Normal,
        TrafficClass::TcpSyn,
        TrafficClass::UdpFlood,
        TrafficClass::IcmpEcho,
        TrafficClass::HttpFlood,
        TrafficClass::Slowloris,
        TrafficClass::Slowpost,
        TrafficClass::BruteForce,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<TrafficClass> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            TrafficClass::Normal => "Normal",
            TrafficClass::TcpSyn => "TcpSyn",
            TrafficClass::UdpFlood => "UdpFlood",
            TrafficClass::IcmpEcho => "IcmpEcho",
            TrafficClass::HttpFlood => "HttpFlood",
            TrafficClass::Slowloris => "Slowloris",
            TrafficClass::Slowpost => "Slowpost",
            TrafficClass::BruteForce => "BruteForce",
        }
    }

    pub fn is_attack(self) -> bool {
        self != TrafficClass::Normal
    }

    /// Case-insensitive lookup that ignores punctuation and whitespace, so
    /// `TCP-SYN`, `tcp_syn` and `TcpSyn` all resolve to the same class.
    pub fn parse_loose(s: &str) -> Option<TrafficClass> {
        let mut key = [0u8; 32];
        let mut len = 0;
        for b in s.bytes().filter(u8::is_ascii_alphanumeric) {
            if len == key.len() {
                return None;
            }
            key[len] = b.to_ascii_lowercase();
            len += 1;
        }
        let class = match &key[..len] {
            b"normal" | b"benign" => TrafficClass::Normal,
            b"tcpsyn" | b"tcpsyns" | b"syn" | b"synflood" => TrafficClass::TcpSyn,
            b"udpflood" | b"udp" | b"udps" => TrafficClass::UdpFlood,
            b"icmpecho" | b"icmpechos" | b"icmp" | b"icmpflood" => TrafficClass::IcmpEcho,
            b"httpflood" | b"http" | b"https" => TrafficClass::HttpFlood,
            b"slowloris" => TrafficClass::Slowloris,
            b"slowpost" => TrafficClass::Slowpost,
            b"bruteforce" | b"brute" => TrafficClass::BruteForce,
            _ => return None,
        };
        Some(class)
    }
}

impl fmt::Display for TrafficClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TrafficClass {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TrafficClass::parse_loose(s).ok_or(CoreError::UnknownClass)
    }
}
