#include <iostream>

int main() {
  std::cout << "acceptance suite pending\n";
  return 1;
}
