#include <doctest.h>

#include <set>

#include "safecomp/certificate.hpp"
#include "safecomp/errors.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/storage.hpp"
#include "support/oracles.hpp"

using namespace safecomp;

TEST_CASE("put is idempotent and content-addressed") {
  BlobStore store;
  const Bytes blob = bytes_of("certificate projection payload");
  const BlobRef ref1 = store.put(blob);
  const BlobRef ref2 = store.put(blob);
  CHECK(ref1 == ref2);
  CHECK(ref1.digest == hash_H(blob));
  CHECK(store.size() == 1);
  CHECK(store.get(ref1) == blob);
}

TEST_CASE("distinct blobs get distinct refs") {
  BlobStore store;
  Rng rng(0x5eed4001);
  std::set<std::string> refs;
  for (int trial = 0; trial < 1000; ++trial)
    refs.insert(store.put(rng.bytes(rng.uniform(1, 64))).digest.hex());
  CHECK(refs.size() > 995);  // repeats only when the random payload repeats
}

TEST_CASE("get fails for unknown refs and during outages") {
  BlobStore store;
  BlobRef unknown;
  unknown.digest.bytes.fill(0x77);
  CHECK_THROWS_AS(store.get(unknown), Error);

  const BlobRef ref = store.put(bytes_of("payload"));
  store.set_available(false);
  CHECK_THROWS_AS(store.get(ref), Error);
  store.set_available(true);
  CHECK(store.get(ref) == bytes_of("payload"));

  // stored bytes hash back to the ref digest
  CHECK(hash_H(store.get(ref)) == ref.digest);
}

TEST_CASE("oracle fetch returns exactly the requested projection entries") {
  BlobStore store;
  Rng rng(0x5eed4002);
  CertProjection cp{16, {}};
  for (int i = 0; i < 40; ++i) cp.items.push_back(Projection{rng.uniform(0, 0xFFFF)});
  const BlobRef ref = store.put(write_projection_file(cp));

  const std::uint32_t i = 17;
  const auto got = oracle_fetch_projection(store, ref, {i - 1, i, i + 1});
  REQUIRE(got.size() == 3);
  // each answer equals the corresponding slice of a full local parse
  const CertProjection full = read_projection_file(store.get(ref));
  CHECK(got.at(i - 1) == full.at(i - 1));
  CHECK(got.at(i) == full.at(i));
  CHECK(got.at(i + 1) == full.at(i + 1));

  CHECK(oracle_fetch_projection_length(store, ref) == 40);
}

TEST_CASE("oracle fetch rejects out-of-bounds indices and junk blobs") {
  BlobStore store;
  CertProjection cp{16, {Projection{1}, Projection{2}}};
  const BlobRef ref = store.put(write_projection_file(cp));

  CHECK_THROWS_AS(oracle_fetch_projection(store, ref, {3}), Error);
  CHECK_THROWS_AS(oracle_fetch_projection(store, ref, {0}), Error);

  const BlobRef junk = store.put(bytes_of("not a projection"));
  CHECK_THROWS_AS(oracle_fetch_projection(store, junk, {1}), Error);
  try {
    oracle_fetch_projection(store, junk, {1});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MalformedProjection);
  }
}

TEST_CASE("oracle fetch propagates outages") {
  BlobStore store;
  CertProjection cp{16, {Projection{1}}};
  const BlobRef ref = store.put(write_projection_file(cp));
  store.set_available(false);
  try {
    oracle_fetch_projection(store, ref, {1});
    FAIL("expected Unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Unavailable);
  }
}

TEST_CASE("persist directory mirrors stored blobs") {
  const auto dir = std::filesystem::temp_directory_path() / "safecomp-blob-test";
  std::filesystem::remove_all(dir);
  {
    BlobStore store(dir);
    const BlobRef ref = store.put(bytes_of("mirrored"));
    const auto path = dir / (ref.digest.hex() + ".blob");
    CHECK(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) == 8);
  }
  std::filesystem::remove_all(dir);
}
