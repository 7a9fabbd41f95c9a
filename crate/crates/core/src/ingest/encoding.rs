//! Strict decoders for the legacy encodings seen in turn-of-the-century
//! Finnish plain text: ISO-8859-1, ISO-8859-15, and Windows-1252.
//!
//! Decoding is strict: bytes that a charset leaves undefined fail the whole
//! candidate instead of being replaced. For the ISO 8859 family the C1
//! control range 0x80–0x9F counts as undefined; text files never use it and
//! treating it as valid would make ISO-8859-1 accept every byte sequence,
//! defeating candidate ordering.

use std::fmt;

/// Candidate encodings, in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextEncoding {
    Utf8,
    Iso8859_1,
    Iso8859_15,
    Windows1252,
}

/// The fixed fallback order used by [`super::normalize_encoding`].
pub const CANDIDATE_ORDER: [TextEncoding; 4] = [
    TextEncoding::Utf8,
    TextEncoding::Iso8859_1,
    TextEncoding::Iso8859_15,
    TextEncoding::Windows1252,
];

impl TextEncoding {
    pub fn name(self) -> &'static str {
        match self {
            TextEncoding::Utf8 => "utf-8",
            TextEncoding::Iso8859_1 => "iso-8859-1",
            TextEncoding::Iso8859_15 => "iso-8859-15",
            TextEncoding::Windows1252 => "windows-1252",
        }
    }
}

impl fmt::Display for TextEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// ISO-8859-15 redefines eight ISO-8859-1 positions (the euro revision).
const ISO_8859_15_OVERRIDES: [(u8, char); 8] = [
    (0xA4, '\u{20AC}'), // €
    (0xA6, '\u{0160}'), // Š
    (0xA8, '\u{0161}'), // š
    (0xB4, '\u{017D}'), // Ž
    (0xB8, '\u{017E}'), // ž
    (0xBC, '\u{0152}'), // Œ
    (0xBD, '\u{0153}'), // œ
    (0xBE, '\u{0178}'), // Ÿ
];

/// Windows-1252 mappings for 0x80–0x9F. `None` marks the five code points
/// the charset leaves undefined.
const WINDOWS_1252_C1: [Option<char>; 32] = [
    Some('\u{20AC}'), // 0x80 €
    None,             // 0x81
    Some('\u{201A}'), // 0x82 ‚
    Some('\u{0192}'), // 0x83 ƒ
    Some('\u{201E}'), // 0x84 „
    Some('\u{2026}'), // 0x85 …
    Some('\u{2020}'), // 0x86 †
    Some('\u{2021}'), // 0x87 ‡
    Some('\u{02C6}'), // 0x88 ˆ
    Some('\u{2030}'), // 0x89 ‰
    Some('\u{0160}'), // 0x8A Š
    Some('\u{2039}'), // 0x8B ‹
    Some('\u{0152}'), // 0x8C Œ
    None,             // 0x8D
    Some('\u{017D}'), // 0x8E Ž
    None,             // 0x8F
    None,             // 0x90
    Some('\u{2018}'), // 0x91 '
    Some('\u{2019}'), // 0x92 '
    Some('\u{201C}'), // 0x93 "
    Some('\u{201D}'), // 0x94 "
    Some('\u{2022}'), // 0x95 •
    Some('\u{2013}'), // 0x96 –
    Some('\u{2014}'), // 0x97 —
    Some('\u{02DC}'), // 0x98 ˜
    Some('\u{2122}'), // 0x99 ™
    Some('\u{0161}'), // 0x9A š
    Some('\u{203A}'), // 0x9B ›
    Some('\u{0153}'), // 0x9C œ
    None,             // 0x9D
    Some('\u{017E}'), // 0x9E ž
    Some('\u{0178}'), // 0x9F Ÿ
];

/// Decode `bytes` strictly as `encoding`. Returns `None` if any byte is
/// invalid or undefined under that encoding.
pub fn decode(bytes: &[u8], encoding: TextEncoding) -> Option<String> {
    match encoding {
        TextEncoding::Utf8 => std::str::from_utf8(bytes).ok().map(str::to_owned),
        TextEncoding::Iso8859_1 => decode_single_byte(bytes, |b| match b {
            0x80..=0x9F => None,
            _ => Some(b as char),
        }),
        TextEncoding::Iso8859_15 => decode_single_byte(bytes, |b| {
            if (0x80..=0x9F).contains(&b) {
                return None;
            }
            match ISO_8859_15_OVERRIDES.iter().find(|(raw, _)| *raw == b) {
                Some(&(_, mapped)) => Some(mapped),
                None => Some(b as char),
            }
        }),
        TextEncoding::Windows1252 => decode_single_byte(bytes, |b| match b {
            0x80..=0x9F => WINDOWS_1252_C1[(b - 0x80) as usize],
            _ => Some(b as char),
        }),
    }
}

fn decode_single_byte(bytes: &[u8], map: impl Fn(u8) -> Option<char>) -> Option<String> {
    let mut out = String::with_capacity(bytes.len());
    for &b in bytes {
        out.push(map(b)?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latin1_maps_bytes_to_matching_codepoints() {
        // Spot checks against the ISO-8859-1 code chart.
        assert_eq!(decode(&[0xE4], TextEncoding::Iso8859_1).unwrap(), "ä");
        assert_eq!(decode(&[0xF6], TextEncoding::Iso8859_1).unwrap(), "ö");
        assert_eq!(decode(&[0xC5], TextEncoding::Iso8859_1).unwrap(), "Å");
        assert_eq!(decode(&[0x41], TextEncoding::Iso8859_1).unwrap(), "A");
    }

    #[test]
    fn latin1_rejects_c1_controls() {
        assert_eq!(decode(&[0x81], TextEncoding::Iso8859_1), None);
        assert_eq!(decode(&[0x9F], TextEncoding::Iso8859_1), None);
    }

    #[test]
    fn latin9_applies_euro_revision() {
        assert_eq!(decode(&[0xA4], TextEncoding::Iso8859_15).unwrap(), "€");
        assert_eq!(decode(&[0xBE], TextEncoding::Iso8859_15).unwrap(), "Ÿ");
        // Unrevised positions behave like ISO-8859-1.
        assert_eq!(decode(&[0xE4], TextEncoding::Iso8859_15).unwrap(), "ä");
    }

    #[test]
    fn windows1252_defines_most_of_c1() {
        assert_eq!(decode(&[0x80], TextEncoding::Windows1252).unwrap(), "€");
        assert_eq!(decode(&[0x94], TextEncoding::Windows1252).unwrap(), "\u{201D}");
        assert_eq!(decode(&[0x81], TextEncoding::Windows1252), None);
        assert_eq!(decode(&[0x9D], TextEncoding::Windows1252), None);
    }

    #[test]
    fn utf8_is_strict() {
        assert_eq!(decode("tuuli".as_bytes(), TextEncoding::Utf8).unwrap(), "tuuli");
        assert_eq!(decode(&[0xE4], TextEncoding::Utf8), None);
    }
}
