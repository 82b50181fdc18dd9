#include "sgp/shift_tables.hpp"

// Shift sets A_1..A_6 and the basic monomial set of the elimination template.
// Monomials are written as variable/power products over
// p = (u, v, w) and t = (x, y, z); the action monomial is 1/w.

namespace sgp::tables {

const char* const kShiftSet1 =
    "1, z, y, x, w, v, u, z^2, yz, xz, zw, vz, uz, y^2, xy, wy, vy, uy, "
    "x^2, wx, vx, ux, w^2, vw, uw, v^2, uv, u^2, zwy, yvz, yuz, zwx, "
    "xvz, zxu, zw^2, zv^2, zvu, zu^2, y^2w, y^2v, y^2u, yxw, yxv, yxu, "
    "yw^2, ywu, yv^2, yvu, yu^2, wx^2, vx^2, ux^2, xw^2, xwv, xwu, xv^2, "
    "xvu, xu^2, w^3, w^2v, w^2u, wv^2, wvu, wu^2, v^3, v^2u, vu^2, u^3, "
    "w^2z^2, v^2z^2, u^2z^2, yzw^2, yzv^2, yzu^2, xzw^2, xzv^2, xzu^2, "
    "w^3z, vzw^2, uzw^2, v^2zw, u^2zw, v^3z, uzv^2, vzu^2, u^3z, w^2y^2, "
    "v^2y^2, u^2y^2, xyw^2, xyv^2, xyu^2, w^3y, vyw^2, uyw^2, v^2yw, "
    "wyu^2, v^3y, uyv^2, u^2yv, u^3y, w^2x^2, v^2x^2, u^2x^2, w^3x, "
    "vxw^2, uxw^2, wxv^2, u^2xw, v^3x, uxv^2, u^2xv, u^3x, w^4, w^3v, "
    "w^3u, w^2v^2, w^2uv, w^2u^2, v^3w, v^2uw, vu^2w, u^3w, v^4, v^3u, "
    "v^2u^2, u^3v, u^4, zw^3y, zvyw^2, zuyw^2, zv^2yw, zwyu^2, zv^3y, "
    "zuyv^2, zu^2yv, zu^3y, zw^3x, zvxw^2, zuxw^2, zwxv^2, zu^2xw, "
    "zv^3x, zuxv^2, zu^2xv, zu^3x, w^4z, vw^3z, uw^3z, v^2w^2z, uvw^2z, "
    "u^2w^2z, v^3wz, uv^2wz, u^2vwz, u^3wz, v^4z, uv^3z, u^2v^2z, u^3vz, "
    "u^4z, w^3y^2, vw^2y^2, uw^2y^2, wv^2y^2, wu^2y^2, v^3y^2, uv^2y^2, "
    "vu^2y^2, u^3y^2, w^3xy, vw^2xy, uw^2xy, v^2wxy, u^2wxy, v^3xy, "
    "uv^2xy, u^2vxy, u^3xy, w^4y, vw^3y, uw^3y, v^2w^2y, uvw^2y, "
    "u^2w^2y, v^3wy, uv^2wy, u^2vwy, u^3wy, v^4y, uv^3y, u^2v^2y, u^3vy, "
    "u^4y, w^3x^2, vw^2x^2, uw^2x^2, wv^2x^2, wu^2x^2, v^3x^2, uv^2x^2, "
    "vu^2x^2, u^3x^2, w^4x, vw^3x, uw^3x, v^2w^2x, uvw^2x, u^2w^2x, "
    "v^3wx, uv^2wx, u^2vwx, u^3wx, v^4x, uv^3x, u^2v^2x, u^3vx, u^4x";

const char* const kShiftSet2 =
    "1, z, y, x, w, v, u, z^2, yz, xz, zw, vz, uz, y^2, xy, wy, vy, uy, "
    "x^2, wx, vx, ux, w^2, vw, uw, v^2, uv, u^2, zwy, yvz, yuz, zwx, "
    "xvz, zxu, zw^2, zwv, zwu, zv^2, zvu, zu^2, y^2w, y^2v, y^2u, yxw, "
    "yxv, yxu, yw^2, ywv, ywu, yv^2, yvu, yu^2, wx^2, vx^2, ux^2, xw^2, "
    "xwv, xwu, xv^2, xvu, xu^2";

const char* const kShiftSet3 =
    "1, z, y, x, w, v, u, z^2, yz, xz, zw, vz, uz, y^2, xy, wy, vy, uy, "
    "x^2, wx, vx, ux, w^2, vw, uw, v^2, uv, u^2, zwy, yvz, yuz, zwx, "
    "xvz, zxu, zw^2, zwu, zv^2, zvu, zu^2, y^2w, y^2v, y^2u, yxw, yxv, "
    "yxu, yw^2, ywv, ywu, yv^2, yvu, yu^2, wx^2, vx^2, ux^2, xw^2, xwv, "
    "xwu, xv^2, xvu, xu^2";

const char* const kShiftSet4 =
    "1, z, y, x, w, v, u, z^2, yz, xz, zw, vz, uz, y^2, xy, wy, vy, uy, "
    "x^2, wx, vx, ux, w^2, vw, uw, v^2, uv, u^2, zwy, yvz, yuz, zwx, "
    "xvz, zxu, zw^2, zv^2, zvu, zu^2, y^2w, y^2v, y^2u, yxw, yxv, yxu, "
    "yw^2, ywv, ywu, yv^2, yvu, yu^2, wx^2, vx^2, ux^2, xw^2, xwv, xwu, "
    "xv^2, xvu, xu^2";

const char* const kShiftSet5 =
    "1, z, y, x, w, v, u, yz, xz, zw, vz, uz, y^2, xy, wy, vy, uy, x^2, "
    "wx, vx, ux, w^2, vw, uw, v^2, uv, u^2, zwy, yvz, yuz, zwx, xvz, "
    "zxu, zw^2, zv^2, zvu, zu^2, y^2w, y^2v, y^2u, yxw, yxv, yxu, yw^2, "
    "ywu, yv^2, yvu, yu^2, wx^2, vx^2, ux^2, xw^2, xwv, xwu, xv^2, xvu, "
    "xu^2";

const char* const kShiftSet6 =
    "1, z, y, x, w, v, u, yz, xz, zw, vz, uz, y^2, xy, wy, vy, uy, x^2, "
    "wx, vx, ux, w^2, vw, uw, v^2, uv, u^2, zwy, yvz, yuz, zwx, xvz, "
    "zxu, zv^2, zvu, zu^2, y^2w, y^2v, y^2u, yxw, yxv, yxu, yw^2, ywu, "
    "yv^2, yvu, yu^2, wx^2, vx^2, ux^2, xw^2, xwv, xwu, xv^2, xvu, "
    "xu^2";

const char* const kBasicSet =
    "zuyw^2, zvyw^2, zw^3y, z^2uwv, wv^2z^2, uw^2z^2, vw^2z^2, w^3z^2, "
    "v^3w, w^2u^2, w^2uv, w^2v^2, w^3u, w^3v, w^4, w^3x, uywv, v^2yw, "
    "uyw^2, vyw^2, w^3y, yxwu, xywv, xyw^2, uwy^2, y^2wv, w^2y^2, u^2zw, "
    "uzwv, v^2zw, uzw^2, vzw^2, w^3z, xzwu, xzwv, xzw^2, yzwu, yzwv, "
    "yzw^2, z^2wu, z^2wv, w^2z^2, wu^2, wvu, wv^2, w^2u, w^2v, w^3, xwu, "
    "xwv, xw^2, ywu, ywv, yw^2, yxw, wy^2, zwu, zwv, zw^2, zwx, zwy, "
    "wz^2, wu, vw, w^2, xw, yw, zw, w";

}  // namespace sgp::tables
