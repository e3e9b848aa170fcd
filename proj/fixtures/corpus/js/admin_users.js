router.delete('/admin/users/:userId', requireAdmin, async (req, res) => {
  const userId = req.params.userId;
  await userService.deleteAccount(userId);
  await auditTrail.record({ action: 'delete-user', userId });
  res.redirect('/admin/users');
});
