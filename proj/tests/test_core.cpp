#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dv/errors.hpp"
#include "dv/image.hpp"
#include "dv/image_io.hpp"
#include "dv/rng.hpp"

using namespace dv;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ImageRgb random_image(Rng& rng, int w, int h) {
  std::vector<double> data(static_cast<size_t>(w) * h * 3);
  for (double& v : data) v = rng.uniform();
  return ImageRgb(w, h, std::move(data));
}

}  // namespace

TEST_CASE("to_signed maps endpoints and midpoint") {
  ImageRgb zeros(2, 2);
  for (double v : to_signed(zeros).data()) CHECK(v == -1.0);

  ImageRgb ones(2, 2, std::vector<double>(12, 1.0));
  for (double v : to_signed(ones).data()) CHECK(v == 1.0);

  ImageRgb mid(2, 2, std::vector<double>(12, 0.5));
  for (double v : to_signed(mid).data()) CHECK(v == 0.0);
}

TEST_CASE("from_signed maps endpoints") {
  ImageSigned lo(2, 2, 3, std::vector<double>(12, -1.0));
  for (double v : from_signed(lo).data()) CHECK(v == 0.0);
  ImageSigned hi(2, 2, 3, std::vector<double>(12, 1.0));
  for (double v : from_signed(hi).data()) CHECK(v == 1.0);
}

TEST_CASE("signed round-trip is the identity within 1e-12") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    ImageRgb img = random_image(rng, 9, 7);
    ImageRgb back = from_signed(to_signed(img));
    for (size_t i = 0; i < img.data().size(); ++i) {
      CHECK(std::abs(back.data()[i] - img.data()[i]) <= 1e-12);
    }
  }
}

TEST_CASE("constructors reject out-of-range values") {
  CHECK_THROWS_AS(ImageRgb(1, 1, {1.2, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ImageRgb(1, 1, {-0.1, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ImageRgb(2, 1, {0.0, 0.0, 0.0}), std::invalid_argument);  // bad length
  CHECK_THROWS_AS(ImageSigned(1, 1, 1, {1.5}), std::invalid_argument);
  CHECK_THROWS_AS(GrayImage(1, 1, {2.0}), std::invalid_argument);
  DepthMap m(2, 2);
  CHECK_THROWS_AS(m.set(0, 0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.set(0, 0, std::nan("")), std::invalid_argument);
}

TEST_CASE("DVIM round-trips bit-exactly") {
  Rng rng(5);
  ImageRgb img = random_image(rng, 13, 6);
  const std::string path = temp_path("dv_test_core.dvim");
  write_dvim(path, img);
  ImageRgb back = read_dvim_rgb(path);
  REQUIRE(back.width() == img.width());
  REQUIRE(back.height() == img.height());
  CHECK(back.data() == img.data());

  DepthMap map(5, 4);
  map.set(1, 2, 3.75);
  map.set(4, 0, 0.0);
  write_dvim(path, map);
  DepthMap mback = read_dvim_depth_map(path);
  CHECK(mback.valid_count() == 2);
  CHECK(mback.depth(1, 2) == 3.75);
  CHECK(mback.depth(4, 0) == 0.0);
  CHECK_FALSE(mback.valid(0, 0));
  std::remove(path.c_str());
}

TEST_CASE("DVIM rejects truncated and foreign files") {
  const std::string path = temp_path("dv_test_core_bad.dvim");
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fwrite("DVIMxx", 1, 6, f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_dvim(path), IoError);
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fwrite("NOPE", 1, 4, f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_dvim(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("PNG write/read quantizes to 8 bits and is deterministic") {
  Rng rng(7);
  ImageRgb img = random_image(rng, 17, 9);
  const std::string path = temp_path("dv_test_core.png");
  write_png(path, img);
  ImageRgb back = read_png(path);
  REQUIRE(back.width() == img.width());
  REQUIRE(back.height() == img.height());
  for (size_t i = 0; i < img.data().size(); ++i) {
    const double expected = std::lround(255.0 * img.data()[i]) / 255.0;
    CHECK(std::abs(back.data()[i] - expected) <= 1e-12);
  }
  CHECK(encode_png(img) == encode_png(img));
  // In-memory encode matches decode.
  ImageRgb back2 = decode_png(encode_png(img));
  CHECK(back2.data() == back.data());
  std::remove(path.c_str());
}
