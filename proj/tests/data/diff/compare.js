// Twin of compare.njs. < and <= there are numeric, so string operands go
// through Number; s< and s<= are plain string relational compares.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

print(1 < 2);
print(2 < 1);
print(NaN < 1);
print(NaN <= NaN);
print(-0 < 0);
print(-0 <= 0);
print(Number("10") < Number("9"));
print(2 <= 2);
print("a" < "b");
print("abc" < "abd");
print("Z" < "a");
print("10" < "9");
print("" < "a");
print("abc" < "ab");
print("abc" <= "abc");
print(1 == "1");
print(null == undefined);
print(null == 0);
print(undefined == 0);
print(true == 1);
print(false == "0");
print("" == 0);
print(" " == 0);
print(NaN == NaN);
print("abc" == "abc");
print(0 == -0);
print(true == "1");
print(false == "");
print(1 === "1");
print(null === null);
print(undefined === undefined);
print(null === undefined);
print(NaN === NaN);
print(-0 === 0);
print("a" === "a");
print(0 && "x");
print(1 && "x");
print(0 || "x");
print("a" || "b");
print("" && 5);
print(undefined || null);
print(NaN && true);
print(NaN || "y");
print(!0);
print(!"");
print(!"0");
print(!null);

process.stdout.write(OUT.map(s => s + "\n").join(""));
