// Twin of arith.njs. Arithmetic in that language always coerces through
// Number, so string operands go through Number() here.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

print(1 + 2);
print(0.1 + 0.2);
print(1 - Number("0.5"));
print(3 * -0);
print(1 / 0);
print(-1 / 0);
print(0 / 0);
print(7 % 3);
print(-7 % 3);
print(7 % -3);
print(5.5 % 2);
print(7 % 0);
print(1 << 31);
print(-8 >> 1);
print(-8 >>> 1);
print(5.9 << 1);
print(-1 >>> 0);
print(1 << 32);
print(256 >> 33);
print(12 & 10);
print(12 | 10);
print(12 ^ 10);
print(~5);
print(~-1);
print(4294967296 | 0);
print(2147483648 | 0);
print(-2.5 | 0);
print(1e200 * 1e200);
print(Infinity + -Infinity);
print(9007199254740992 - 1);
print(9007199254740992 + 1);
print(1 / -0);
print(-Number("3"));

process.stdout.write(OUT.map(s => s + "\n").join(""));
