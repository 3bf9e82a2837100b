//! From a raw JSONL playlist dump to a filtered corpus and a train/test
//! split.
//!
//! Ingest canonicalizes artist/title strings (lowercase, accents folded,
//! punctuation dropped), interns each distinct song, filters playlists and
//! rare songs to a fixed point, and renumbers the surviving songs densely.
//! Splitting keeps whole playlists together and restricts the test side to
//! the training vocabulary.
//!
//! Run with: `cargo run --example ingest_and_split`

use nextsong::corpus::{filter_corpus, parse_corpus, split_corpus, FilterConfig};

fn main() -> nextsong::error::Result<()> {
    // A tiny dump: 14 playlists rotating over 9 songs. Note the messy
    // spellings: they all collapse to the same canonical songs.
    let mut lines = Vec::new();
    for i in 0..14 {
        let songs: Vec<String> = (0..6)
            .map(|k| {
                let s = (i + k) % 9;
                match (s, k) {
                    (0, _) => r#"{"artist":"BEYONCÉ","title":"Halo!!"}"#.to_string(),
                    (1, _) => r#"{"artist":"beyonce","title":"halo"}"#.to_string(),
                    _ => format!(r#"{{"artist":"Artist {s}","title":"Song No. {s}"}}"#),
                }
            })
            .collect();
        lines.push(format!(r#"{{"id":"mix-{i:02}","songs":[{}]}}"#, songs.join(",")));
    }
    let raw = parse_corpus(lines.join("\n").as_bytes())?;
    println!(
        "parsed: {} playlists, {} distinct songs",
        raw.playlists().len(),
        raw.vocab_size()
    );
    // "BEYONCÉ / Halo!!" and "beyonce / halo" became one song, so some
    // playlists now hold it twice.
    let halo = raw
        .songs()
        .iter()
        .find(|s| s.title == "halo")
        .expect("canonical song present");
    println!("canonical: {} — {}", halo.artist, halo.title);

    let config = FilterConfig {
        min_song_playlist_count: 4, // the dump is tiny; the default of 10 is for real data
        ..FilterConfig::default()
    };
    let filtered = filter_corpus(&raw, &config)?;
    println!(
        "filtered: {} playlists, {} songs (thresholds met for all of them)",
        filtered.playlists().len(),
        filtered.vocab_size()
    );

    let split = split_corpus(&filtered, 0.8, 7)?;
    println!(
        "split (seed 7): {} train / {} test playlists, shared vocabulary of {} songs",
        split.train.playlists().len(),
        split.test.playlists().len(),
        split.train.vocab_size()
    );
    assert_eq!(split.train.songs(), split.test.songs());

    // Every processing stage records what it did.
    println!("provenance:");
    for line in split.train.provenance() {
        println!("  - {line}");
    }
    Ok(())
}
