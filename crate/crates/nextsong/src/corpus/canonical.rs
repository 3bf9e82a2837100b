use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Canonicalize an `(artist, title)` pair so that trivially different
/// spellings of the same song collapse to one vocabulary entry.
///
/// Each string is put through, in order: Unicode NFKD decomposition,
/// lowercasing, removal of everything except alphanumerics and whitespace,
/// and whitespace collapsing (runs become one space, ends are trimmed).
/// The transform is idempotent. If either side comes out empty the song
/// carries no usable identity and a rejected-song error is returned.
pub fn canonicalize_song(artist: &str, title: &str) -> Result<(String, String)> {
    let artist_c = canonicalize_text(artist);
    let title_c = canonicalize_text(title);
    if artist_c.is_empty() || title_c.is_empty() {
        return Err(Error::RejectedSong {
            artist: artist.to_string(),
            title: title.to_string(),
        });
    }
    Ok((artist_c, title_c))
}

fn canonicalize_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for decomposed in raw.nfkd() {
        for c in decomposed.to_lowercase() {
            if c.is_alphanumeric() {
                if pending_space && !out.is_empty() {
                    out.push(' ');
                }
                pending_space = false;
                out.push(c);
            } else if c.is_whitespace() {
                pending_space = true;
            }
            // everything else (punctuation, symbols, combining marks) drops
        }
    }
    out
}
